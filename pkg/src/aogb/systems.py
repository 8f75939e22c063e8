"""Reference ciphers and their keyed iterated polynomial models.

Families: MiMC, Feistel-MiMC (2n/n), GMiMC with expanding (erf) or
contracting (crf) round function, Hades, and the Feistel-MiMC sponge hash.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import asdict, dataclass, field
from typing import Sequence

from .gf import is_permutation_exponent
from .linalg import mat_inv_mod, mat_mul_small, mat_vec_mod
from .mpoly import DRL, Polynomial, Ring, as_order

FAMILIES = ("mimc", "feistel_mimc", "gmimc_erf", "gmimc_crf", "feistel_scrf", "hades", "feistel_hash")
MULTIBRANCH_FAMILIES = ("gmimc_erf", "gmimc_crf", "feistel_scrf", "hades")
LAYERS = ("shift", "circulant", "cauchy", "random", "identity")


@dataclass
class CipherSpec:
    family: str
    q: int
    rounds: int = 0
    branches: int = 1
    exponent: int = 3
    round_constants: list | None = None
    seed: int = 0
    layer: str = "shift"
    r_f: int = 0
    r_p: int = 0
    key_schedule: str = "none"

    def __post_init__(self):
        self.family = self.family.lower()
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.family == "hades":
            if self.r_f < 0 or self.r_p < 0 or 2 * self.r_f + self.r_p < 1:
                raise ValueError("Hades needs r_f, r_p >= 0 and at least one round")
            self.rounds = 2 * self.r_f + self.r_p
        if self.rounds < 1:
            raise ValueError("at least one round is required")
        if self.family in ("mimc", "feistel_mimc", "feistel_hash"):
            self.branches = 1 if self.family == "mimc" else 2
        if self.family in ("mimc", "hades") and not is_permutation_exponent(self.exponent, self.q):
            raise ValueError(f"x^{self.exponent} is not a permutation of F_{self.q}")
        if self.layer not in LAYERS:
            raise ValueError(f"unknown affine layer {self.layer!r}")
        if self.key_schedule not in ("none", "affine"):
            raise ValueError("key schedule must be 'none' or 'affine'")
        if self.key_schedule == "affine" and not self.multibranch:
            raise ValueError("affine key schedules are modelled for GMiMC and Hades only")
        if self.round_constants is None:
            self.round_constants = self._draw_constants()
        self._check_constants()

    @property
    def multibranch(self) -> bool:
        return self.family in MULTIBRANCH_FAMILIES

    def _rng(self, tag: str) -> random.Random:
        return random.Random(f"{self.seed}:{tag}")

    def _draw_constants(self):
        rng = self._rng("constants")
        if self.multibranch:
            return [[rng.randrange(self.q) for _ in range(self.branches)] for _ in range(self.rounds)]
        return [rng.randrange(self.q) for _ in range(self.rounds)]

    def _check_constants(self):
        rc = self.round_constants
        if len(rc) != self.rounds:
            raise ValueError("one round constant per round is required")
        if self.multibranch and any(len(c) != self.branches for c in rc):
            raise ValueError("round constants must be vectors of length n")
        if self.multibranch:
            self.round_constants = [[int(x) % self.q for x in c] for c in rc]
        else:
            self.round_constants = [int(c) % self.q for c in rc]

    # affine layers
    def matrix(self, i: int) -> list[list[int]]:
        """Affine layer matrix of round i (1-based)."""
        n, q = self.branches, self.q
        kind = self.layer
        if kind == "shift":
            return [[1 if j == (k - 1) % n else 0 for j in range(n)] for k in range(n)]
        if kind == "identity":
            return [[int(j == k) for j in range(n)] for k in range(n)]
        if kind == "circulant":
            a = list(range(1, n + 1))
            return [[a[(j - k) % n] % q for j in range(n)] for k in range(n)]
        if kind == "cauchy":
            xs = list(range(n))
            ys = list(range(n, 2 * n))
            return [[pow(x + y, q - 2, q) for y in ys] for x in xs]
        rng = self._rng(f"matrix:{i}")
        while True:
            M = [[rng.randrange(q) for _ in range(n)] for _ in range(n)]
            try:
                mat_inv_mod(M, q)
                return M
            except ValueError:
                continue

    def matrix_inverse(self, i: int) -> list[list[int]]:
        return mat_inv_mod(self.matrix(i), self.q)

    def key_schedule_affine(self, i: int):
        """Round key k_i = K_i y + b_i (i >= 1); identity when no schedule."""
        n, q = self.branches, self.q
        if self.key_schedule == "none":
            return [[int(j == k) for j in range(n)] for k in range(n)], [0] * n
        rng = self._rng(f"keysched:{i}")
        while True:
            K = [[rng.randrange(q) for _ in range(n)] for _ in range(n)]
            try:
                mat_inv_mod(K, q)
                break
            except ValueError:
                continue
        return K, [rng.randrange(q) for _ in range(n)]

    def partial_round(self, i: int) -> bool:
        return self.family == "hades" and self.r_f < i <= self.r_f + self.r_p

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> "CipherSpec":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown CipherSpec field(s): {sorted(unknown)}")
        return cls(**data)

    def digest(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


# reference evaluation

def _mimc_encrypt(spec: CipherSpec, k: int, p: int):
    q, d, rc = spec.q, spec.exponent, spec.round_constants
    x, trace = p % q, []
    for i in range(spec.rounds - 1):
        x = pow(x + k + rc[i], d, q)
        trace.append(x)
    return (pow(x + k + rc[-1], d, q) + k) % q, trace


def _feistel_encrypt(spec: CipherSpec, k: int, pl: int, pr: int):
    q, d, rc = spec.q, spec.exponent, spec.round_constants
    xl, xr, trace = pl % q, pr % q, []
    for i in range(spec.rounds):
        xl, xr = (xr + pow(xl + k + rc[i], d, q)) % q, xl
        if i < spec.rounds - 1:
            trace.append((xl, xr))
    return ((xl + k) % q, xr), trace


def _feistel_decrypt(spec: CipherSpec, k: int, cl: int, cr: int):
    q, d, rc = spec.q, spec.exponent, spec.round_constants
    xl, xr = (cl - k) % q, cr % q
    for i in reversed(range(spec.rounds)):
        xl, xr = xr, (xl - pow(xr + k + rc[i], d, q)) % q
    return xl, xr


def sbox_layer(spec: CipherSpec, i: int, s: list, pw=None):
    """Nonlinear layer of round i on a state vector (field ints or polynomials)."""
    d = spec.exponent
    n = spec.branches
    if pw is None:
        q = spec.q

        def pw(v, e):
            return pow(v, e, q)
    if spec.family == "hades":
        if spec.partial_round(i):
            return [pw(s[0], d)] + list(s[1:])
        return [pw(v, d) for v in s]
    if spec.family == "gmimc_erf":
        t = pw(s[n - 1], d)
        return [s[j] + t for j in range(n - 1)] + [s[n - 1]]
    if spec.family == "gmimc_crf":
        acc = s[1]
        for v in s[2:]:
            acc = acc + v
        return [s[0] + pw(acc, d)] + list(s[1:])
    if spec.family == "feistel_scrf":
        # strong contracting layer: x_j + x_{j+1}^d for j < n
        return [s[j] + pw(s[j + 1], d) for j in range(n - 1)] + [s[n - 1]]
    raise ValueError("not a multi-branch family")


def _spn_encrypt(spec: CipherSpec, key: Sequence[int], p: Sequence[int]):
    q, n = spec.q, spec.branches
    s = [(int(a) + int(b)) % q for a, b in zip(p, key)]
    trace = []
    for i in range(1, spec.rounds + 1):
        s = [v % q for v in sbox_layer(spec, i, s)]
        s = mat_vec_mod(spec.matrix(i), s, q)
        K, b = spec.key_schedule_affine(i)
        k = mat_vec_mod(K, key, q)
        s = [(v + c + kk + bb) % q for v, c, kk, bb in zip(s, spec.round_constants[i - 1], k, b)]
        if i < spec.rounds:
            trace.append(list(s))
    return s, trace


def encrypt_trace(spec: CipherSpec, key, plaintext):
    """Ciphertext together with the intermediate states after each round but the last."""
    q = spec.q
    if spec.family == "mimc":
        return _mimc_encrypt(spec, int(key) % q, int(plaintext))
    if spec.family in ("feistel_mimc", "feistel_hash"):
        if len(plaintext) != 2:
            raise ValueError("Feistel plaintexts are pairs")
        return _feistel_encrypt(spec, int(key) % q, int(plaintext[0]), int(plaintext[1]))
    if len(key) != spec.branches or len(plaintext) != spec.branches:
        raise ValueError("key and plaintext must have n components")
    return _spn_encrypt(spec, [int(k) % q for k in key], plaintext)


def encrypt(spec: CipherSpec, key, plaintext):
    return encrypt_trace(spec, key, plaintext)[0]


def decrypt(spec: CipherSpec, key, ciphertext):
    """Inverse permutation for the Feistel families (test oracle)."""
    if spec.family not in ("feistel_mimc", "feistel_hash"):
        raise ValueError("decryption is provided for Feistel-MiMC only")
    return _feistel_decrypt(spec, int(key) % spec.q, int(ciphertext[0]), int(ciphertext[1]))


# polynomial systems

@dataclass
class PolySystem:
    ring: Ring
    polys: list
    roles: dict
    provenance: dict = field(default_factory=dict)
    order: str = "drl"
    spec: CipherSpec | None = None
    blocks: list | None = None  # per round: indices of its polynomials

    def __post_init__(self):
        for f in self.polys:
            if f.ring != self.ring:
                raise ValueError("polynomial outside the system ring")
        missing = set(self.ring.variables) - set(self.roles)
        if missing:
            raise ValueError(f"variables without role: {sorted(missing)}")

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def degrees(self) -> list[int]:
        return [f.degree() for f in self.polys]

    def variables_with_role(self, prefix: str) -> list[str]:
        return [v for v in self.ring.variables if self.roles[v].startswith(prefix)]

    def replace(self, polys, ring=None, roles=None, note: str | None = None, blocks="keep") -> "PolySystem":
        prov = dict(self.provenance)
        if note:
            prov["transforms"] = list(prov.get("transforms", [])) + [note]
        ring = ring or self.ring
        roles = roles or {v: self.roles[v] for v in ring.variables}
        return PolySystem(ring, list(polys), roles, prov, self.order, self.spec,
                          self.blocks if blocks == "keep" else blocks)

    def point(self, values: dict) -> list[int]:
        return [int(values[v]) for v in self.ring.variables]

    def vanishes_at(self, values: dict) -> bool:
        pt = self.point(values)
        return all(f.evaluate(pt) == 0 for f in self.polys)

    def to_json(self) -> dict:
        return {
            "q": self.ring.q,
            "variables": list(self.ring.variables),
            "order": self.order,
            "roles": dict(self.roles),
            "polys": [f.to_str(self.order) for f in self.polys],
            "provenance": self.provenance,
            "spec": self.spec.to_json() if self.spec else None,
        }

    @classmethod
    def from_json(cls, data: dict) -> "PolySystem":
        for key in ("q", "variables", "polys"):
            if key not in data:
                raise ValueError(f"PolySystem JSON lacks field {key!r}")
        ring = Ring.make(data["variables"], int(data["q"]))
        polys = [ring.parse(s) for s in data["polys"]]
        roles = data.get("roles") or {v: "unknown" for v in ring.variables}
        spec = CipherSpec.from_json(data["spec"]) if data.get("spec") else None
        return cls(ring, polys, roles, data.get("provenance", {}), data.get("order", "drl"), spec)


def build_mimc_system(spec: CipherSpec, p: int, c: int) -> PolySystem:
    if spec.family != "mimc":
        raise ValueError("MiMC builder needs a MiMC spec")
    r, d, rc = spec.rounds, spec.exponent, spec.round_constants
    names = [f"x{i}" for i in range(1, r)] + ["y"]
    R = Ring.make(names, spec.q)
    y = R.gen("y")
    xs = [R.gen(f"x{i}") for i in range(1, r)]
    polys = []
    prev = R.const(p)
    for i in range(r):
        g = (prev + y + rc[i]) ** d
        if i < r - 1:
            polys.append(g - xs[i])
            prev = xs[i]
        else:
            polys.append(g + y - c)
    roles = {f"x{i}": f"state({i},1)" for i in range(1, r)}
    roles["y"] = "key"
    prov = {"builder": "mimc", "p": p % spec.q, "c": c % spec.q, "spec_digest": spec.digest(),
            "variable_order": "x1 > ... > x_{r-1} > y"}
    return PolySystem(R, polys, roles, prov, "drl", spec, [[i] for i in range(r)])


def build_two_plaintext_system(spec: CipherSpec, pair1, pair2) -> PolySystem:
    if spec.family != "mimc":
        raise ValueError("two-plaintext builder needs a MiMC spec")
    (p1, c1), (p2, c2) = pair1, pair2
    q = spec.q
    if (p1 % q, c1 % q) == (p2 % q, c2 % q):
        raise ValueError("the two plain/ciphertext pairs must differ")
    r, d, rc = spec.rounds, spec.exponent, spec.round_constants
    names = [f"u{i}" for i in range(1, r)] + [f"v{i}" for i in range(1, r)] + ["y"]
    R = Ring.make(names, q)
    y = R.gen("y")
    polys = []
    for tag, p, c in (("u", p1, c1), ("v", p2, c2)):
        prev = R.const(p)
        for i in range(r):
            g = (prev + y + rc[i]) ** d
            if i < r - 1:
                xi = R.gen(f"{tag}{i + 1}")
                polys.append(g - xi)
                prev = xi
            else:
                polys.append(g + y - c)
    roles = {f"u{i}": f"state({i},1)" for i in range(1, r)}
    roles.update({f"v{i}": f"state({i},2)" for i in range(1, r)})
    roles["y"] = "key"
    prov = {"builder": "two_plaintext", "pairs": [[p1 % q, c1 % q], [p2 % q, c2 % q]],
            "spec_digest": spec.digest(), "variable_order": "u1 > ... > u_{r-1} > v1 > ... > v_{r-1} > y",
            "poly_names": [f"f{i}" for i in range(1, r + 1)] + [f"h{i}" for i in range(1, r + 1)]}
    blocks = [[i, r + i] for i in range(r)]
    return PolySystem(R, polys, roles, prov, "drl", spec, blocks)


def _feistel_polys(R: Ring, spec: CipherSpec, pl, pr, cl, cr, y, names_L, names_R):
    """The 2n polynomials (f_{L,i}, f_{R,i}) of the Feistel-2n/n model."""
    n, d, rc = spec.rounds, spec.exponent, spec.round_constants
    xl, xr = pl, pr
    polys = []
    for i in range(n):
        g = (xl + y + rc[i]) ** d
        if i == n - 1:
            g = g + y
            polys.append(xr + g - cl)
            polys.append(xl - cr)
        else:
            nl, nr = R.gen(names_L[i]), R.gen(names_R[i])
            polys.append(xr + g - nl)
            polys.append(xl - nr)
            xl, xr = nl, nr
    return polys


def build_feistel_system(spec: CipherSpec, plaintext, ciphertext) -> PolySystem:
    if spec.family != "feistel_mimc":
        raise ValueError("Feistel builder needs a Feistel-MiMC spec")
    n = spec.rounds
    if n < 2:
        raise ValueError("the Feistel model needs at least two rounds")
    names_L = [f"xL{i}" for i in range(1, n)]
    names_R = [f"xR{i}" for i in range(1, n)]
    names = [v for i in range(n - 1) for v in (names_L[i], names_R[i])] + ["y"]
    R = Ring.make(names, spec.q)
    y = R.gen("y")
    (pl, pr), (cl, cr) = plaintext, ciphertext
    polys = _feistel_polys(R, spec, R.const(pl), R.const(pr), R.const(cl), R.const(cr), y, names_L, names_R)
    roles = {}
    for i in range(1, n):
        roles[f"xL{i}"] = f"state({i},L)"
        roles[f"xR{i}"] = f"state({i},R)"
    roles["y"] = "key"
    q = spec.q
    prov = {"builder": "feistel", "plaintext": [pl % q, pr % q], "ciphertext": [cl % q, cr % q],
            "spec_digest": spec.digest(), "variable_order": "xL1 > xR1 > ... > xL_{n-1} > xR_{n-1} > y",
            "poly_names": [f"f{s}{i}" for i in range(1, n + 1) for s in ("L", "R")]}
    return PolySystem(R, polys, roles, prov, "drl", spec, [[2 * i, 2 * i + 1] for i in range(n)])


def build_hash_preimage_system(spec: CipherSpec, alpha: int, message_branch: str = "right") -> PolySystem:
    """Preimage model Feistel(m) = (alpha, x2) for the one-block sponge.

    ``message_branch='right'`` puts the unknown x1 into the right input and a
    zero into the left one, so the first round is affine and the model has
    r - 1 cubic polynomials in r - 1 variables after linear substitution.
    ``'left'`` is the literal (x1, 0) input, whose first round is already
    nonlinear (r cubic polynomials)."""
    if spec.family != "feistel_hash":
        raise ValueError("hash builder needs a feistel_hash spec")
    if message_branch not in ("left", "right"):
        raise ValueError("message_branch is 'left' or 'right'")
    n = spec.rounds
    if n < 2:
        raise ValueError("the Feistel model needs at least two rounds")
    names_L = [f"xL{i}" for i in range(1, n)]
    names_R = [f"xR{i}" for i in range(1, n)]
    states = [v for i in reversed(range(n - 1)) for v in (names_R[i], names_L[i])]
    R = Ring.make(states + ["x1", "x2"], spec.q)
    x1, x2 = R.gen("x1"), R.gen("x2")
    zero = R.const(0)
    pl, pr = (x1, zero) if message_branch == "left" else (zero, x1)
    polys = _feistel_polys(R, spec, pl, pr, R.const(alpha), x2, zero, names_L, names_R)
    roles = {v: f"state({v[2:]},{v[1]})" for v in states}
    roles["x1"] = "plaintext_unknown"
    roles["x2"] = "hash_output_unknown"
    prov = {"builder": "feistel_hash", "alpha": alpha % spec.q, "message_branch": message_branch,
            "spec_digest": spec.digest(),
            "variable_order": "xR_{n-1} > xL_{n-1} > ... > xR1 > xL1 > x1 > x2",
            "poly_names": [f"f{s}{i}" for i in range(1, n + 1) for s in ("L", "R")]}
    return PolySystem(R, polys, roles, prov, "drl", spec, [[2 * i, 2 * i + 1] for i in range(n)])


def hash_digest(spec: CipherSpec, message: int, message_branch: str = "right"):
    """(alpha, x2) for a one-block message under the hash model."""
    pt = (message, 0) if message_branch == "left" else (0, message)
    return encrypt(spec, 0, pt)


def build_spn_system(spec: CipherSpec, p: Sequence[int], c: Sequence[int]) -> PolySystem:
    """Multivariate keyed iterated model A_i P_i(x^(i-1)) + c_i + k_i - x^(i)."""
    if not spec.multibranch:
        raise ValueError("multi-branch builder needs a GMiMC or Hades spec")
    n, r, q = spec.branches, spec.rounds, spec.q
    if len(p) != n or len(c) != n:
        raise ValueError("plain/ciphertext must have n components")
    names = [f"x{i}_{j}" for i in range(1, r) for j in range(1, n + 1)] + [f"y{j}" for j in range(1, n + 1)]
    R = Ring.make(names, q)
    y = [R.gen(f"y{j}") for j in range(1, n + 1)]
    state = [R.const(a) + yy for a, yy in zip(p, y)]
    polys, blocks = [], []
    for i in range(1, r + 1):
        s = sbox_layer(spec, i, state, pw=lambda v, e: v ** e)
        A = spec.matrix(i)
        K, b = spec.key_schedule_affine(i)
        out = [R.gen(f"x{i}_{j}") for j in range(1, n + 1)] if i < r else [R.const(v) for v in c]
        block = []
        for j in range(n):
            f = R.zero()
            for k in range(n):
                if A[j][k]:
                    f = f + s[k] * A[j][k]
                if K[j][k]:
                    f = f + y[k] * K[j][k]
            f = f + (spec.round_constants[i - 1][j] + b[j]) - out[j]
            block.append(len(polys))
            polys.append(f)
        blocks.append(block)
        state = out
    roles = {f"x{i}_{j}": f"state({i},{j})" for i in range(1, r) for j in range(1, n + 1)}
    roles.update({f"y{j}": "key" for j in range(1, n + 1)})
    prov = {"builder": spec.family, "plaintext": [int(a) % q for a in p], "ciphertext": [int(a) % q for a in c],
            "spec_digest": spec.digest(), "layer": spec.layer,
            "constant_placement": "after the affine layer",
            "variable_order": "x^(1) > ... > x^(r-1) > y, branches ascending"}
    return PolySystem(R, polys, roles, prov, "drl", spec, blocks)


def build_gmimc_system(spec: CipherSpec, p, c) -> PolySystem:
    if spec.family not in ("gmimc_erf", "gmimc_crf", "feistel_scrf"):
        raise ValueError("GMiMC builder needs a GMiMC spec")
    return build_spn_system(spec, p, c)


def build_hades_system(spec: CipherSpec, p, c) -> PolySystem:
    if spec.family != "hades":
        raise ValueError("Hades builder needs a Hades spec")
    return build_spn_system(spec, p, c)


def append_field_equations(sys: PolySystem, variables: Sequence[str]) -> PolySystem:
    if not variables:
        return sys
    q = sys.ring.q
    extra = []
    for v in variables:
        x = sys.ring.gen(v)
        extra.append(x ** q - x)
    return sys.replace(list(sys.polys) + extra, note=f"field_equations({','.join(variables)})")


def _blockwise(sys: PolySystem, mats) -> list[Polynomial]:
    polys = list(sys.polys)
    for blk, M in zip(sys.blocks, mats):
        old = [sys.polys[k] for k in blk]
        for row, k in zip(M, blk):
            f = sys.ring.zero()
            for a, g in zip(row, old):
                if a:
                    f = f + g * a
            polys[k] = f
    return polys


def _check_multibranch(sys: PolySystem):
    if sys.spec is None or not sys.spec.multibranch or sys.blocks is None:
        raise ValueError("transform needs a GMiMC or Hades system")


def spn_transform(sys: PolySystem) -> PolySystem:
    """G = {A_i^{-1} f^(i)}."""
    _check_multibranch(sys)
    mats = [sys.spec.matrix_inverse(i) for i in range(1, sys.spec.rounds + 1)]
    return sys.replace(_blockwise(sys, mats), note="spn_transform")


def apply_round_matrices(sys: PolySystem) -> PolySystem:
    """Inverse of spn_transform: f^(i) <- A_i f^(i)."""
    _check_multibranch(sys)
    mats = [sys.spec.matrix(i) for i in range(1, sys.spec.rounds + 1)]
    return sys.replace(_blockwise(sys, mats), note="apply_round_matrices")


def gmimc_erf_transform(sys: PolySystem) -> PolySystem:
    """A_i^{-1} f^(i), then components 2..n-1 minus component 1."""
    if sys.spec is None or sys.spec.family != "gmimc_erf":
        raise ValueError("erf transform needs a GMiMC-erf system")
    n, q = sys.spec.branches, sys.ring.q
    mats = []
    for i in range(1, sys.spec.rounds + 1):
        Ainv = sys.spec.matrix_inverse(i)
        E = [[int(j == k) for k in range(n)] for j in range(n)]
        for j in range(1, n - 1):
            E[j][0] = q - 1
        mats.append(mat_mul_small(E, Ainv, q))
    return sys.replace(_blockwise(sys, mats), note="gmimc_erf_transform")


def eliminate_linear(sys: PolySystem, order=DRL) -> PolySystem:
    """Use each affine polynomial (in listed order) to eliminate its leading
    variable from the others, drop it, and repeat until no affine polynomial
    is left.  The remaining variables keep their relative order."""
    order = as_order(order)
    polys = [f for f in sys.polys if not f.is_zero()]
    eliminated: list[str] = []
    exprs: dict = {}
    changed = True
    while changed:
        changed = False
        for k, f in enumerate(polys):
            if f.degree() != 1:
                continue
            lm, lc = f.leading_term(order)
            v = lm.index(1)
            inv = pow(lc, sys.ring.q - 2, sys.ring.q)
            expr = (f.scale(inv) - sys.ring.gen(v)).scale(sys.ring.q - 1)
            rest = polys[:k] + polys[k + 1:]
            polys = [g.substitute({v: expr}) if g.degree_in(v) > 0 else g for g in rest]
            polys = [g for g in polys if not g.is_zero()]
            exprs = {w: e.substitute({v: expr}) if e.degree_in(v) > 0 else e for w, e in exprs.items()}
            exprs[sys.ring.variables[v]] = expr
            eliminated.append(sys.ring.variables[v])
            changed = True
            break
    keep = [v for v in sys.ring.variables if v not in eliminated]
    R = Ring.make(keep, sys.ring.q)
    polys = [g.change_ring(R) for g in polys]
    sysn = sys.replace(polys, ring=R, note=f"eliminate_linear({','.join(eliminated)})", blocks=None)
    sysn.provenance["eliminated"] = eliminated
    # eliminated variables as affine-substituted expressions in the kept variables
    sysn.provenance["eliminated_exprs"] = {w: e.change_ring(R).to_str() for w, e in exprs.items()}
    return sysn


def sponge_example_f5() -> PolySystem:
    """Two-round sponge over F_5 (hash value 0) whose top component loses y_out."""
    R = Ring.make(["x1_1", "x2_1", "x1_2", "x2_2", "x_in", "y_out"], 5)
    text = ["x_in^3 + 2*x1_1 + x2_1", "-2*x_in^3 + x1_1 + 2*x2_1",
            "x1_1^3 + 2*x1_2 + x2_2", "x2_1 + x1_2 + 2*x2_2",
            "x1_2^3 + y_out", "x2_2^3 + 2*y_out"]
    roles = {v: "state" for v in R.variables}
    roles["x_in"] = "plaintext_unknown"
    roles["y_out"] = "hash_output_unknown"
    return PolySystem(R, [R.parse(t) for t in text], roles, {"builder": "sponge_example_f5"})


def random_instance(spec: CipherSpec, rng: random.Random):
    """Random key and plaintext suited to the family."""
    q = spec.q
    if spec.family == "mimc":
        return rng.randrange(q), rng.randrange(q)
    if spec.family in ("feistel_mimc",):
        return rng.randrange(q), (rng.randrange(q), rng.randrange(q))
    if spec.family == "feistel_hash":
        return 0, rng.randrange(q)
    n = spec.branches
    return [rng.randrange(q) for _ in range(n)], [rng.randrange(q) for _ in range(n)]


def trace_point(sys: PolySystem, key, trace, extra: dict | None = None) -> dict:
    """Variable assignment (name -> value) of a true solution from an encryption trace."""
    fam = sys.spec.family
    pt: dict = dict(extra or {})
    if fam == "mimc":
        pt["y"] = key
        for i, x in enumerate(trace, 1):
            pt[f"x{i}"] = x
    elif fam in ("feistel_mimc", "feistel_hash"):
        if "y" in sys.ring.variables:
            pt["y"] = key
        for i, (a, b) in enumerate(trace, 1):
            pt[f"xL{i}"] = a
            pt[f"xR{i}"] = b
    else:
        for j, k in enumerate(key, 1):
            pt[f"y{j}"] = k
        for i, s in enumerate(trace, 1):
            for j, v in enumerate(s, 1):
                pt[f"x{i}_{j}"] = v
    return {v: pt[v] for v in sys.ring.variables}


# desk instances of the attack models

ATTACK_MODELS = ("field_eq", "mimc", "two_plaintext", "feistel", "feistel_downsized", "hash", "spn")


@dataclass
class AttackInstance:
    model: str
    system: PolySystem
    spec: CipherSpec
    truth: dict

    def to_json(self) -> dict:
        return {"model": self.model, "truth": self.truth, "system": self.system.to_json()}


def attack_instance(model: str, q: int, rounds: int, seed: int = 0, exponent: int = 3,
                    spec: CipherSpec | None = None, message_branch: str = "right") -> AttackInstance:
    """Seeded key/plaintext, encryption-oracle ciphertext and the model's polynomial system.

    field_eq: MiMC plus y^q - y.  two_plaintext: MiMC with two plaintexts p, p + 1.
    feistel / feistel_downsized: Feistel-MiMC full system or its downsized basis plus f_{R,n}.
    hash: linearly eliminated preimage system plus x2^q - x2.  spn: GMiMC or Hades from ``spec``."""
    if model not in ATTACK_MODELS:
        raise ValueError(f"unknown attack model {model!r}")
    families = {"field_eq": ("mimc",), "mimc": ("mimc",), "two_plaintext": ("mimc",),
                "feistel": ("feistel_mimc",), "feistel_downsized": ("feistel_mimc",), "hash": ("feistel_hash",),
                "spn": MULTIBRANCH_FAMILIES}
    if spec is not None and spec.family not in families[model]:
        raise ValueError(f"attack model {model!r} needs a spec of family {' or '.join(families[model])}, "
                         f"got {spec.family!r}")
    rng = random.Random(f"{seed}:instance")
    if model in ("field_eq", "mimc", "two_plaintext"):
        spec = spec or CipherSpec("mimc", q, rounds, exponent=exponent, seed=seed)
        k, p = random_instance(spec, rng)
        c = encrypt(spec, k, p)
        truth = {"key": k, "plaintext": p, "ciphertext": c}
        if model == "two_plaintext":
            p2 = (p + 1) % q
            c2 = encrypt(spec, k, p2)
            truth.update(plaintext2=p2, ciphertext2=c2)
            S = build_two_plaintext_system(spec, (p, c), (p2, c2))
        else:
            S = build_mimc_system(spec, p, c)
            if model == "field_eq":
                S = append_field_equations(S, ["y"])
    elif model in ("feistel", "feistel_downsized"):
        spec = spec or CipherSpec("feistel_mimc", q, rounds, exponent=exponent, seed=seed)
        k, pt = random_instance(spec, rng)
        ct = encrypt(spec, k, pt)
        truth = {"key": k, "plaintext": list(pt), "ciphertext": list(ct)}
        S = build_feistel_system(spec, pt, ct)
        if model == "feistel_downsized":
            from .shapelex import downsized_drl_feistel
            S = downsized_drl_feistel(S, with_last_right=True)
    elif model == "hash":
        spec = spec or CipherSpec("feistel_hash", q, rounds, exponent=exponent, seed=seed)
        m = rng.randrange(q)
        alpha, x2 = hash_digest(spec, m, message_branch)
        truth = {"message": m, "alpha": alpha, "x2": x2}
        S = eliminate_linear(build_hash_preimage_system(spec, alpha, message_branch))
        if "x2" in S.ring.variables:
            S = append_field_equations(S, ["x2"])
    else:
        if spec is None or not spec.multibranch:
            raise ValueError("the spn model needs a GMiMC or Hades spec")
        k, p = random_instance(spec, rng)
        c = encrypt(spec, k, p)
        truth = {"key": list(k), "plaintext": list(p), "ciphertext": list(c)}
        S = build_spn_system(spec, p, c)
    return AttackInstance(model, S, spec, truth)
