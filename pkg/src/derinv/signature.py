"""Invariant signatures: aggregation, serialization, and comparison.

A signature collects every dimension invariant the library computes for
one symmetric algebra: the degree-0 Kulshammer data (T_n, its
orthogonal, central p-power spaces, zeta/kappa ranks, stabilization
index), Hochschild homology and cohomology dimensions, the higher
kappa adjoint ranks for a configured set of (m, n) pairs, and the
Gerstenhaber block (rank of the sigma_p image span and the derived
subalgebra of HH^1).

Two signatures over the same field are compared entry by entry, but
only on the entries that are invariant under derived equivalence; the
ambient dimension dim A and the ambient T_n dimensions are recorded for
traceability yet never enter the verdict, and neither does the
symmetrizing-form fingerprint.  Entries whose computation exceeded the
size cap carry an explicit "skipped: cap" marker and are excluded from
comparison.  Unequal shared entries certify that the two algebras are
not derived equivalent (verdict DISTINGUISHED); equal signatures are
INCONCLUSIVE, never a claim of equivalence.

Signatures are pure functions of (algebra, config): no randomness, no
environment, stable key order, byte-identical serialization.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field as dataclass_field
from itertools import product

import numpy as np

from .algebras import Algebra
from .errors import (
    Incomparable,
    InvariantViolation,
    MalformedDocument,
    SchemaVersionMismatch,
    SizeCapExceeded,
)
from .gerstenhaber import bracket, sigma_p
from .hochschild import Cochain, hh_cohomology, hh_homology
from .higher import kappa_nm, t_nm_space
from .kulshammer import (
    kappa_kernel,
    kappa_image,
    p_n_space,
    quotient_mod_ka,
    stabilization_index,
    t_n_space,
    zeta_image,
)
from .linalg import Subspace

SCHEMA_VERSION = 1

SKIPPED_CAP = "skipped: cap"
SKIPPED_ENUMERATION = "skipped: enumeration"
SKIPPED_PARITY = "skipped: parity"

# entries outside any derived-equivalence invariant: recorded for
# traceability, never compared
_LOCAL_KEY = re.compile(r"^(dim_a|dim_t_\d+)$")


def _default_kappa_pairs(p: int) -> tuple[tuple[int, int], ...]:
    if p == 2:
        return ((0, 1), (0, 2), (1, 1), (2, 1))
    return ((0, 1), (0, 2), (2, 1))


@dataclass(frozen=True)
class SignatureConfig:
    """Degrees and caps for one signature computation.

    ``kappa_pairs = None`` selects the characteristic-dependent default
    set of (m, n) adjoint degrees.  ``sigma_enumeration_limit`` bounds
    the number of cohomology classes enumerated for the sigma_p image
    span; larger class groups get a "skipped: enumeration" marker.
    """

    n_max: int = 3
    m_max: int = 3
    kappa_pairs: tuple[tuple[int, int], ...] | None = None
    gerstenhaber_degrees: tuple[int, ...] = (1,)
    sigma_enumeration_limit: int = 2**20
    size_cap: int | None = None

    def resolved_pairs(self, p: int) -> tuple[tuple[int, int], ...]:
        if self.kappa_pairs is None:
            return _default_kappa_pairs(p)
        return tuple((int(m), int(n)) for m, n in self.kappa_pairs)


@dataclass(frozen=True)
class InvariantSignature:
    p: int
    e: int
    gram_fingerprint: str
    entries: dict = dataclass_field(default_factory=dict)

    def shared_keys(self) -> list[str]:
        """Keys that participate in comparison: derived-invariant, not skipped."""
        return [
            k
            for k, v in self.entries.items()
            if not _LOCAL_KEY.match(k) and isinstance(v, int)
        ]


def sigma_class_rank(algebra: Algebra, m: int, limit: int, size_cap: int | None):
    """Dimension of the span of sigma_p over all degree-m classes."""
    f = algebra.field
    coh = hh_cohomology(algebra, m, size_cap)
    target = hh_cohomology(algebra, f.p * (m - 1) + 1, size_cap)
    if coh.dim == 0:
        return 0
    if f.q**coh.dim > limit:
        return SKIPPED_ENUMERATION
    reps_flat = np.stack([c.flat() for c in coh.cochains()])
    span = Subspace.zero(f, target.dim)
    for coeffs in product(range(f.q), repeat=coh.dim):
        row = np.asarray(coeffs, dtype=np.int8).reshape(1, -1)
        combo = Cochain.from_flat(algebra, m, f.matmul(row, reps_flat).reshape(-1))
        coords = target.class_coords(sigma_p(combo, size_cap).flat())
        if not span.contains(coords):
            span = span.add(Subspace.from_rows(f, coords.reshape(1, -1)))
            if span.dim == target.dim:
                break
    return span.dim


def derived_hh1_dim(algebra: Algebra, size_cap: int | None) -> int:
    """dim of the span of [HH^1, HH^1] inside HH^1."""
    coh = hh_cohomology(algebra, 1, size_cap)
    if coh.dim == 0:
        return 0
    reps = coh.cochains()
    rows = []
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            rows.append(coh.class_coords(bracket(reps[i], reps[j], size_cap).flat()))
    if not rows:
        return 0
    return Subspace.from_rows(algebra.field, np.stack(rows)).dim


def compute_signature(algebra: Algebra, config: SignatureConfig | None = None) -> InvariantSignature:
    config = config or SignatureConfig()
    form = algebra.require_form()
    f = algebra.field
    cap = config.size_cap
    entries: dict = {}

    entries["dim_a"] = algebra.dim
    entries["dim_center"] = algebra.center().dim
    quot = quotient_mod_ka(algebra)
    entries["dim_a_mod_ka"] = quot.dim

    prev_perp = None
    for n in range(1, config.n_max + 1):
        t_dim = t_n_space(algebra, n).dim
        perp = algebra.dim - t_dim
        entries[f"dim_t_{n}"] = t_dim
        entries[f"dim_t_perp_{n}"] = perp
        entries[f"dim_p_{n}"] = p_n_space(algebra, n).dim
        entries[f"dim_im_zeta_{n}"] = zeta_image(algebra, n).dim
        im_k = kappa_image(algebra, n).dim
        ker_k = kappa_kernel(algebra, n).dim
        entries[f"dim_im_kappa_{n}"] = im_k
        entries[f"dim_ker_kappa_{n}"] = ker_k
        if im_k + ker_k != quot.dim:
            raise InvariantViolation(f"rank-nullity fails for kappa_{n}")
        if prev_perp is not None and perp > prev_perp:
            raise InvariantViolation("dim T_n-perp increased with n")
        prev_perp = perp
    entries["stabilization_index"] = stabilization_index(algebra)

    for m in range(config.m_max + 1):
        try:
            entries[f"dim_hh_homology_{m}"] = hh_homology(algebra, m, cap).dim
        except SizeCapExceeded:
            entries[f"dim_hh_homology_{m}"] = SKIPPED_CAP
        try:
            entries[f"dim_hh_cohomology_{m}"] = hh_cohomology(algebra, m, cap).dim
        except SizeCapExceeded:
            entries[f"dim_hh_cohomology_{m}"] = SKIPPED_CAP

    for m, n in config.resolved_pairs(f.p):
        keys = (f"dim_im_kappa_m{m}_n{n}", f"dim_t_m{m}_n{n}", f"dim_ker_kappa_m{m}_n{n}")
        try:
            kap = kappa_nm(algebra, m, n, cap)
            t_dim = t_nm_space(algebra, m, n, cap).dim
            coh_dim = hh_cohomology(algebra, m, cap).dim
            if kap.rank != coh_dim - t_dim:
                raise InvariantViolation(f"rank of kappa_{n}^({m}) violates the dimension formula")
            entries[keys[0]] = kap.rank
            entries[keys[1]] = t_dim
            entries[keys[2]] = kap.kernel().dim
        except SizeCapExceeded:
            for key in keys:
                entries[key] = SKIPPED_CAP

    for deg in config.gerstenhaber_degrees:
        key = f"sigma_rank_deg_{deg}"
        if f.p > 2 and deg % 2 == 0:
            entries[key] = SKIPPED_PARITY
            continue
        try:
            entries[key] = sigma_class_rank(algebra, deg, config.sigma_enumeration_limit, cap)
        except SizeCapExceeded:
            entries[key] = SKIPPED_CAP
    try:
        entries["dim_derived_hh1"] = derived_hh1_dim(algebra, cap)
    except SizeCapExceeded:
        entries["dim_derived_hh1"] = SKIPPED_CAP

    for k, v in entries.items():
        if isinstance(v, (int, np.integer)):
            v = int(v)
            entries[k] = v
            if v < 0:
                raise InvariantViolation(f"negative entry {k}")
    return InvariantSignature(p=f.p, e=f.e, gram_fingerprint=form.fingerprint(), entries=entries)


def compare(sig_a: InvariantSignature, sig_b: InvariantSignature) -> dict:
    """Verdict on derived equivalence from two signatures.

    DISTINGUISHED lists the differing derived-invariant entries and
    certifies the algebras are not derived equivalent; INCONCLUSIVE
    means every shared entry agrees (which never proves equivalence).
    Entries skipped in either signature do not participate.  Different
    fields are Incomparable.
    """
    if (sig_a.p, sig_a.e) != (sig_b.p, sig_b.e):
        raise Incomparable(
            f"fields differ: GF({sig_a.p}^{sig_a.e}) vs GF({sig_b.p}^{sig_b.e})"
        )
    shared = sorted(set(sig_a.shared_keys()) & set(sig_b.shared_keys()))
    differences = [
        {"key": k, "a": sig_a.entries[k], "b": sig_b.entries[k]}
        for k in shared
        if sig_a.entries[k] != sig_b.entries[k]
    ]
    return {
        "schema_version": SCHEMA_VERSION,
        "verdict": "DISTINGUISHED" if differences else "INCONCLUSIVE",
        "differences": differences,
        "shared_entries": len(shared),
    }


def signature_to_json(sig: InvariantSignature) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "field": {"p": sig.p, "e": sig.e},
        "gram_fingerprint": sig.gram_fingerprint,
        "entries": dict(sig.entries),
    }


def serialize_signature(sig: InvariantSignature) -> str:
    """Deterministic JSON text: sorted keys, no whitespace variation."""
    return json.dumps(signature_to_json(sig), sort_keys=True, separators=(",", ": "))


_SKIP_PREFIX = "skipped: "


def signature_from_json(doc) -> InvariantSignature:
    """Strict parse: unknown or malformed fields are rejected."""
    if not isinstance(doc, dict):
        raise MalformedDocument("signature document must be an object")
    expected = {"schema_version", "field", "gram_fingerprint", "entries"}
    unknown = set(doc) - expected
    if unknown:
        raise MalformedDocument(f"unknown fields: {sorted(unknown)}")
    missing = expected - set(doc)
    if missing:
        raise MalformedDocument(f"missing fields: {sorted(missing)}")
    if doc["schema_version"] != SCHEMA_VERSION:
        raise SchemaVersionMismatch(f"schema_version {doc['schema_version']} != {SCHEMA_VERSION}")
    fld = doc["field"]
    if not isinstance(fld, dict) or set(fld) != {"p", "e"}:
        raise MalformedDocument("field descriptor must have exactly p and e")
    if not all(isinstance(fld[k], int) and fld[k] > 0 for k in ("p", "e")):
        raise MalformedDocument("field descriptor entries must be positive integers")
    if not isinstance(doc["gram_fingerprint"], str):
        raise MalformedDocument("gram_fingerprint must be a string")
    entries = doc["entries"]
    if not isinstance(entries, dict):
        raise MalformedDocument("entries must be an object")
    for k, v in entries.items():
        if isinstance(v, bool) or not isinstance(v, (int, str)):
            raise MalformedDocument(f"entry {k} must be an integer or a skip marker")
        if isinstance(v, int) and v < 0:
            raise MalformedDocument(f"entry {k} is negative")
        if isinstance(v, str) and not v.startswith(_SKIP_PREFIX):
            raise MalformedDocument(f"entry {k} has a malformed marker")
    return InvariantSignature(
        p=fld["p"], e=fld["e"],
        gram_fingerprint=doc["gram_fingerprint"],
        entries=dict(entries),
    )


def parse_signature(text: str) -> InvariantSignature:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"invalid JSON: {exc}") from exc
    return signature_from_json(doc)
