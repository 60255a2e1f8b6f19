"""Matrix operators between l_p spaces, mixed block norms, and the gallery.

An operator is a real matrix together with a domain and a range space.
Spaces are either flat ``SequenceSpace``s, block/mixed spaces (the outer
exponent applied to the vector of inner block norms), or any 2D object
exposing ``dim``/``norm``/``norm_cols`` (see ``convexity.Norm2D``).

Structured constructions (block diagonal, zero-padded) remember how they
were built so the norm computation can certify them exactly from their 2D
constituents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spaces import (
    INF,
    SequenceSpace,
    check_exponent,
    dual_exponent,
    pnorm,
    pnorm_cols,
)

GALLERY_TAGS = (
    "DIAG-2-INF",
    "DIAG-2-2",
    "DIAG-P-Q",
    "ROT-2-1",
    "ROT-2-Q",
    "COMPOSE-P-Q",
    "BIORTH-INF",
    "AUERBACH-YY",
    "PROJ-N-2",
    "BLOCK-N",
    "LPLQ-FAIL-N",
)


class HypothesisError(ValueError):
    """A construction was requested outside its hypothesis range."""


@dataclass(frozen=True)
class BlockSpace:
    """Outer l_p sum of finite-dimensional blocks: ||x|| = || (||x_n||)_n ||_outer."""

    outer_p: float
    blocks: tuple

    def __post_init__(self):
        object.__setattr__(self, "outer_p", check_exponent(self.outer_p))
        if not self.blocks:
            raise ValueError("BlockSpace needs at least one block")

    @property
    def dim(self) -> int:
        return sum(b.dim for b in self.blocks)

    def _offsets(self):
        off = [0]
        for b in self.blocks:
            off.append(off[-1] + b.dim)
        return off

    def norm(self, x) -> float:
        x = np.asarray(x, dtype=float)
        off = self._offsets()
        inner = [b.norm(x[off[i]:off[i + 1]]) for i, b in enumerate(self.blocks)]
        return pnorm(inner, self.outer_p)

    def norm_cols(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        off = self._offsets()
        inner = np.vstack(
            [b.norm_cols(X[off[i]:off[i + 1], :]) for i, b in enumerate(self.blocks)]
        )
        return pnorm_cols(inner, self.outer_p)

    def dual(self) -> "BlockSpace":
        return BlockSpace(dual_exponent(self.outer_p), tuple(b.dual() for b in self.blocks))

    def __repr__(self):
        p = "inf" if self.outer_p == INF else f"{self.outer_p:g}"
        return f"l_{p}({'+'.join(map(repr, self.blocks))})"


def dual_space(space):
    return space.dual()


def norm_dual_vector(space, y) -> np.ndarray:
    """A norm-one-in-dual vector u with <u, y> = ||y|| (norm subgradient at y)."""
    y = np.asarray(y, dtype=float)
    if isinstance(space, BlockSpace):
        off = space._offsets()
        inner_norms = np.array(
            [b.norm(y[off[i]:off[i + 1]]) for i, b in enumerate(space.blocks)]
        )
        outer = SequenceSpace(len(space.blocks), space.outer_p)
        w = norm_dual_vector(outer, inner_norms)
        u = np.zeros_like(y)
        for i, b in enumerate(space.blocks):
            u[off[i]:off[i + 1]] = w[i] * norm_dual_vector(b, y[off[i]:off[i + 1]])
        return u
    q = space.p
    a = np.abs(y)
    m = a.max()
    if m == 0.0:
        u = np.zeros_like(y)
        u[0] = 1.0
        return u
    if q == INF:
        u = np.zeros_like(y)
        k = int(np.argmax(a))
        u[k] = math.copysign(1.0, y[k])
        return u
    if q == 1.0:
        return np.sign(y)
    v = np.sign(y) * (a / m) ** (q - 1.0)
    return v / pnorm_cols(v[:, None], dual_exponent(q))[0]


def dual_attainer(space, z) -> np.ndarray:
    """Unit vector of `space` maximizing <z, x>; the dual-norm attainer."""
    z = np.asarray(z, dtype=float)
    if isinstance(space, BlockSpace):
        off = space._offsets()
        duals = np.array(
            [pnorm(z[off[i]:off[i + 1]], dual_exponent(b.p)) if not isinstance(b, BlockSpace)
             else b.dual().norm(z[off[i]:off[i + 1]])
             for i, b in enumerate(space.blocks)]
        )
        outer = SequenceSpace(len(space.blocks), space.outer_p)
        t = dual_attainer(outer, duals)
        x = np.zeros_like(z)
        for i, b in enumerate(space.blocks):
            x[off[i]:off[i + 1]] = t[i] * dual_attainer(b, z[off[i]:off[i + 1]])
        return x
    p = space.p
    a = np.abs(z)
    m = a.max()
    if m == 0.0:
        x = np.zeros_like(z)
        x[0] = 1.0
        return x
    if p == INF:
        return np.where(z >= 0.0, 1.0, -1.0)
    if p == 1.0:
        x = np.zeros_like(z)
        k = int(np.argmax(a))
        x[k] = math.copysign(1.0, z[k])
        return x
    pd = dual_exponent(p)
    v = np.sign(z) * (a / m) ** (pd - 1.0)
    return v / pnorm(v, p)


@dataclass(frozen=True)
class GalleryId:
    """Tag plus parameters identifying one gallery construction."""

    tag: str
    params: tuple  # sorted (name, value) pairs

    def __post_init__(self):
        if self.tag not in GALLERY_TAGS:
            raise ValueError(f"unknown gallery tag {self.tag!r}")
        object.__setattr__(self, "params", tuple(sorted(self.params)))

    @staticmethod
    def make(tag: str, **params) -> "GalleryId":
        return GalleryId(tag, tuple(params.items()))

    def as_dict(self) -> dict:
        return dict(self.params)


@dataclass
class OperatorPQ:
    """A real matrix acting from `domain` to `range` (rows = range dim)."""

    matrix: np.ndarray
    domain: object
    range: object
    gallery: GalleryId | None = None
    structure: tuple | None = None  # ("blockdiag", ops) | ("pad", R) | None

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=float)
        if self.matrix.ndim != 2:
            raise ValueError("operator matrix must be 2-dimensional")
        if self.matrix.shape != (self.range.dim, self.domain.dim):
            raise ValueError(
                f"matrix shape {self.matrix.shape} does not match "
                f"(range.dim, domain.dim) = ({self.range.dim}, {self.domain.dim})"
            )
        if not np.all(np.isfinite(self.matrix)):
            raise ValueError("operator matrix entries must be finite")

    def apply(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.domain.dim,):
            raise ValueError(
                f"input length {x.shape} does not match domain dim {self.domain.dim}"
            )
        return self.matrix @ x

    def range_values(self, X) -> np.ndarray:
        """||T x||_range for each column x of X."""
        return self.range.norm_cols(self.matrix @ np.asarray(X, dtype=float))

    def adjoint(self) -> "OperatorPQ":
        structure = None
        if self.structure is not None and self.structure[0] == "blockdiag":
            structure = ("blockdiag", tuple(op.adjoint() for op in self.structure[1]))
        return OperatorPQ(
            self.matrix.T.copy(),
            domain=dual_space(self.range),
            range=dual_space(self.domain),
            structure=structure,
        )

    def to_json_dict(self) -> dict:
        def exp_of(space):
            p = getattr(space, "p", getattr(space, "outer_p", None))
            if p is None:
                return "custom"
            return "inf" if p == INF else float(p)

        return {
            "tag": self.gallery.tag if self.gallery else None,
            "params": self.gallery.as_dict() if self.gallery else {},
            "matrix": self.matrix.tolist(),
            "p": exp_of(self.domain),
            "q": exp_of(self.range),
        }


def apply(T: OperatorPQ, x) -> np.ndarray:
    """Matrix-vector action of the operator."""
    return T.apply(x)


def adjoint(T: OperatorPQ) -> OperatorPQ:
    """Transpose with dualized exponents: the q' -> p' adjoint."""
    return T.adjoint()


# ---------------------------------------------------------------------------
# gallery constructors
# ---------------------------------------------------------------------------


def _require(cond: bool, msg: str):
    if not cond:
        raise HypothesisError(msg)


def make_diag_beta(beta: float, p, q) -> OperatorPQ:
    """diag(beta, 1): l_p^2 -> l_q^2 with 1 < p <= q < inf or p < q = inf.

    Unit norm, attained only at +-e2; ||T e1||_q = beta and the attainment
    set sits at p-distance 2^(1/p) from e1.
    """
    p = check_exponent(p)
    q = check_exponent(q)
    _require(0.0 < beta < 1.0, f"diag construction requires beta in (0,1); got {beta}")
    _require(p > 1.0 and p != INF, f"diag construction requires 1 < p < inf; got p={p}")
    _require(
        q >= p, f"diag construction requires p <= q (or p < q = inf); got p={p}, q={q}"
    )
    if q == INF:
        tag = "DIAG-2-INF" if p == 2.0 else "DIAG-P-Q"
    elif p == 2.0 and q == 2.0:
        tag = "DIAG-2-2"
    else:
        tag = "DIAG-P-Q"
    return OperatorPQ(
        np.diag([beta, 1.0]),
        SequenceSpace(2, p),
        SequenceSpace(2, q),
        gallery=GalleryId.make(tag, beta=beta, p=p, q=q),
    )


def make_rot_l1(beta: float) -> OperatorPQ:
    """(x, y) -> ((beta x - y)/2, (beta x + y)/2): l_2^2 -> l_1^2."""
    _require(0.0 < beta <= 1.0, f"rotation into l_1 requires beta in (0,1]; got {beta}")
    M = np.array([[beta / 2.0, -0.5], [beta / 2.0, 0.5]])
    return OperatorPQ(
        M,
        SequenceSpace(2, 2.0),
        SequenceSpace(2, 1.0),
        gallery=GalleryId.make("ROT-2-1", beta=beta),
    )


def make_rot_lq(beta: float, q) -> OperatorPQ:
    """(x, y) -> ((beta x - y), (beta x + y)) / 2^(1/q): l_2^2 -> l_q^2, 1 <= q < 2.

    For q >= 2 the construction breaks down: the arc midpoint already reaches
    value >= 1, so the request is refused.
    """
    q = check_exponent(q)
    _require(0.0 < beta <= 1.0, f"rotation into l_q requires beta in (0,1]; got {beta}")
    _require(
        1.0 <= q < 2.0,
        f"rotation into l_q requires 1 <= q < 2 (at q >= 2 the midpoint "
        f"(1/sqrt2, 1/sqrt2) reaches value >= 1); got q={q}",
    )
    r = 2.0 ** (-1.0 / q)
    M = np.array([[beta * r, -r], [beta * r, r]])
    return OperatorPQ(
        M,
        SequenceSpace(2, 2.0),
        SequenceSpace(2, q),
        gallery=GalleryId.make("ROT-2-Q", beta=beta, q=q),
    )


def make_compose(beta: float, p, q) -> OperatorPQ:
    """Rotation into l_q precomposed with the identity l_p^2 -> l_2^2.

    Requires 1 < p <= 2 and 1 <= q < 2; the coordinates match the rotation
    matrix, only the domain exponent changes.
    """
    p = check_exponent(p)
    q = check_exponent(q)
    _require(0.0 < beta < 1.0, f"composition requires beta in (0,1); got {beta}")
    _require(1.0 < p <= 2.0, f"composition requires 1 < p <= 2; got p={p}")
    _require(1.0 <= q < 2.0, f"composition requires 1 <= q < 2; got q={q}")
    base = make_rot_lq(beta, q)
    return OperatorPQ(
        base.matrix.copy(),
        SequenceSpace(2, p),
        SequenceSpace(2, q),
        gallery=GalleryId.make("COMPOSE-P-Q", beta=beta, p=p, q=q),
    )


def make_biorth_inf(space: SequenceSpace, eta: float) -> OperatorPQ:
    """x -> ((1 - eta) x_1, x_2) into l_inf^2, from any l_p^n with n >= 2.

    The first two coordinate functionals form a biorthogonal system of norm
    one for every p, so the construction is valid on all of them.
    """
    _require(space.dim >= 2, f"biorthogonal construction requires dim >= 2; got {space.dim}")
    _require(0.0 < eta < 1.0, f"biorthogonal construction requires eta in (0,1); got {eta}")
    n = space.dim
    M = np.zeros((2, n))
    M[0, 0] = 1.0 - eta
    M[1, 1] = 1.0
    R = OperatorPQ(
        np.diag([1.0 - eta, 1.0]), SequenceSpace(2, space.p), SequenceSpace(2, INF)
    )
    return OperatorPQ(
        M,
        space,
        SequenceSpace(2, INF),
        gallery=GalleryId.make("BIORTH-INF", eta=eta, p=space.p, dim=n),
        structure=("pad", R),
    )


def make_auerbach_yy(basis, beta: float) -> OperatorPQ:
    """beta y1*(y) e1 + y2*(y) e2 on a 2D space, from an Auerbach system.

    `basis` is a convexity.AuerbachSystem; domain = range = its space.  With
    the canonical system on l_p^2 this reduces to diag(beta, 1).
    """
    _require(0.0 < beta < 1.0, f"Auerbach construction requires beta in (0,1); got {beta}")
    _require(
        getattr(basis.space, "dim", None) == 2,
        "Auerbach construction requires a 2-dimensional basis",
    )
    E = np.column_stack(basis.vectors)  # columns e1, e2
    F = np.vstack(basis.functionals)  # rows y1*, y2*
    M = E @ np.diag([beta, 1.0]) @ F
    return OperatorPQ(
        M,
        basis.space,
        basis.space,
        gallery=GalleryId.make(
            "AUERBACH-YY",
            beta=beta,
            p=getattr(basis.space, "p", float("nan")),
        ),
    )


def make_proj_then(R: OperatorPQ, n: int) -> OperatorPQ:
    """R composed with the projection onto the first two coordinates: [R | 0].

    Domain is l_p^n with p = R's domain exponent (n >= 2 stands in for the
    infinite-dimensional domain); the norm and attainment set are R's.
    """
    _require(R.domain.dim == 2, "projection construction requires a 2D-domain block")
    _require(n >= 2, f"projection construction requires n >= 2; got {n}")
    M = np.zeros((R.range.dim, n))
    M[:, :2] = R.matrix
    return OperatorPQ(
        M,
        SequenceSpace(n, R.domain.p),
        R.range,
        gallery=GalleryId.make("PROJ-N-2", dim=n),
        structure=("pad", R),
    )


def make_block(ops, p_outer=2.0, q_outer=INF) -> OperatorPQ:
    """Block-diagonal operator between outer l_p / l_q sums of the blocks.

    The domain norm is the p_outer-norm of the vector of block domain norms
    (and analogously for the range); when every inner exponent equals the
    outer one the space collapses to the flat l_p of the total dimension,
    which is the same norm exactly.
    """
    ops = list(ops)
    _require(len(ops) >= 1, "block construction requires at least one block")
    p_outer = check_exponent(p_outer)
    q_outer = check_exponent(q_outer)
    d0, r0 = ops[0].domain.dim, ops[0].range.dim
    for op in ops:
        _require(
            op.domain.dim == d0 and op.range.dim == r0,
            "all blocks must share domain/range dimensions",
        )
    dom_blocks = tuple(op.domain for op in ops)
    rng_blocks = tuple(op.range for op in ops)

    def _assemble(blocks, outer):
        flat = all(
            isinstance(b, SequenceSpace) and b.p == outer for b in blocks
        )
        if flat:
            return SequenceSpace(sum(b.dim for b in blocks), outer)
        return BlockSpace(outer, blocks)

    N = len(ops)
    M = np.zeros((N * r0, N * d0))
    for i, op in enumerate(ops):
        M[i * r0:(i + 1) * r0, i * d0:(i + 1) * d0] = op.matrix
    return OperatorPQ(
        M,
        _assemble(dom_blocks, p_outer),
        _assemble(rng_blocks, q_outer),
        gallery=GalleryId.make("BLOCK-N", n_blocks=N),
        structure=("blockdiag", tuple(ops)),
    )


def make_shrinking_blocks(N: int, p=2.0, q=2.0) -> list[OperatorPQ]:
    """Blocks diag(n/(n+1), 1), n = 1..N, each on l_p^2 -> l_q^2."""
    _require(N >= 1, f"need at least one block; got {N}")
    return [
        OperatorPQ(
            np.diag([n / (n + 1.0), 1.0]), SequenceSpace(2, p), SequenceSpace(2, q)
        )
        for n in range(1, N + 1)
    ]


def make_lplq_fail(p, q, N: int) -> OperatorPQ:
    """Block diagonal of diag(1 - 1/(2n), 1), n = 1..N, as l_p^{2N} -> l_q^{2N}.

    Finite truncation of the sequence-space construction whose modulus
    profile degenerates: the n-th block nearly attains the norm while the
    attainment set keeps every odd coordinate at zero.
    """
    p = check_exponent(p)
    q = check_exponent(q)
    _require(
        1.0 < p <= q < INF,
        f"the failing l_p -> l_q family requires 1 < p <= q < inf; got p={p}, q={q}",
    )
    _require(N >= 1, f"need at least one block; got {N}")
    blocks = tuple(
        OperatorPQ(
            np.diag([1.0 - 1.0 / (2.0 * n), 1.0]),
            SequenceSpace(2, p),
            SequenceSpace(2, q),
        )
        for n in range(1, N + 1)
    )
    M = np.zeros((2 * N, 2 * N))
    for i, op in enumerate(blocks):
        M[2 * i:2 * i + 2, 2 * i:2 * i + 2] = op.matrix
    return OperatorPQ(
        M,
        SequenceSpace(2 * N, p),
        SequenceSpace(2 * N, q),
        gallery=GalleryId.make("LPLQ-FAIL-N", p=p, q=q, n_blocks=N),
        structure=("blockdiag", blocks),
    )


def from_gallery(tag: str, **params) -> OperatorPQ:
    """Build a gallery operator from its tag and canonical parameters.

    Canonical parameters: beta everywhere a contraction factor appears
    (BIORTH-INF uses eta = 1 - beta), p/q exponents, dim for ambient
    dimension, blocks for the number of diagonal blocks.
    """
    if tag == "DIAG-2-INF":
        return make_diag_beta(params["beta"], 2.0, INF)
    if tag == "DIAG-2-2":
        return make_diag_beta(params["beta"], 2.0, 2.0)
    if tag == "DIAG-P-Q":
        return make_diag_beta(params["beta"], params["p"], params["q"])
    if tag == "ROT-2-1":
        return make_rot_l1(params["beta"])
    if tag == "ROT-2-Q":
        return make_rot_lq(params["beta"], params["q"])
    if tag == "COMPOSE-P-Q":
        return make_compose(params["beta"], params["p"], params["q"])
    if tag == "BIORTH-INF":
        space = SequenceSpace(int(params.get("dim", 3)), params.get("p", 2.0))
        eta = params.get("eta", 1.0 - params["beta"] if "beta" in params else None)
        return make_biorth_inf(space, eta)
    if tag == "AUERBACH-YY":
        from .convexity import auerbach_2d

        basis = auerbach_2d(SequenceSpace(2, params.get("p", 2.0)))
        return make_auerbach_yy(basis, params["beta"])
    if tag == "PROJ-N-2":
        R = OperatorPQ(
            np.diag([params.get("beta", 0.5), 1.0]),
            SequenceSpace(2, 2.0),
            SequenceSpace(2, 2.0),
        )
        return make_proj_then(R, int(params.get("dim", 4)))
    if tag == "BLOCK-N":
        return make_block(make_shrinking_blocks(int(params.get("blocks", 5))))
    if tag == "LPLQ-FAIL-N":
        return make_lplq_fail(
            params.get("p", 2.0), params.get("q", 2.0), int(params.get("blocks", 5))
        )
    raise ValueError(f"unknown gallery tag {tag!r}")
