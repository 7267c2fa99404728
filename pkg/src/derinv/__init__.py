"""derinv: exact derived invariants of symmetric algebras over GF(p^e)."""

from .algebras import (
    Algebra,
    SymmetrizingForm,
    change_basis,
    cyclic_table,
    klein_table,
    load_algebra,
    make_group_algebra,
    make_matrix_algebra,
    make_trivial_extension,
    make_truncated_polynomial,
    save_algebra,
    symmetric_table,
)
from .fields import GF, Field
from .gerstenhaber import (
    Coderivation,
    bracket,
    build_dA,
    coderivation,
    is_coderivation,
    jacobson_si,
    restricted_axioms_check,
    sigma_p,
)
from .higher import kappa_nm, power_class_matrix, t_nm_space, verify_properties
from .hochschild import (
    Cochain,
    cup,
    cup_power,
    hh_cohomology,
    hh_homology,
    pairing,
    pairing_gram,
)
from .kulshammer import (
    kappa_image,
    kappa_kernel,
    kappa_n,
    kulshammer_report,
    p_n_space,
    quotient_mod_ka,
    stabilization_index,
    t_n_space,
    zeta_image,
    zeta_n,
)
from .linalg import Mat, SemilinearOperator, Subspace, orthogonal_complement, semilinear_solve
from .signature import (
    InvariantSignature,
    SignatureConfig,
    compare,
    compute_signature,
    parse_signature,
    serialize_signature,
)

__version__ = "0.1.0"

__all__ = [
    "GF",
    "Field",
    "Mat",
    "SemilinearOperator",
    "Subspace",
    "orthogonal_complement",
    "semilinear_solve",
    "Algebra",
    "SymmetrizingForm",
    "change_basis",
    "cyclic_table",
    "klein_table",
    "symmetric_table",
    "load_algebra",
    "save_algebra",
    "make_group_algebra",
    "make_matrix_algebra",
    "make_trivial_extension",
    "make_truncated_polynomial",
    "quotient_mod_ka",
    "t_n_space",
    "p_n_space",
    "zeta_n",
    "zeta_image",
    "kappa_n",
    "kappa_image",
    "kappa_kernel",
    "stabilization_index",
    "kulshammer_report",
    "Cochain",
    "hh_homology",
    "hh_cohomology",
    "pairing",
    "pairing_gram",
    "cup",
    "cup_power",
    "kappa_nm",
    "t_nm_space",
    "power_class_matrix",
    "verify_properties",
    "Coderivation",
    "coderivation",
    "is_coderivation",
    "build_dA",
    "bracket",
    "sigma_p",
    "jacobson_si",
    "restricted_axioms_check",
    "InvariantSignature",
    "SignatureConfig",
    "compute_signature",
    "compare",
    "serialize_signature",
    "parse_signature",
    "__version__",
]
