"""Degree-wise cochain cohomology of Sullivan models over Q.

The cochain complex of a model in a fixed degree window splits into connected
components: two monomials interact only when one appears in the differential
of the other.  Most monomials of a big model are inert (closed, and never hit
by a differential), so they are their own cohomology classes; the remaining
active monomials fall into small components on which dense exact elimination
is cheap.  Dimensions need only the two boundary ranks per component, so the
kernel and representative data are computed lazily, on first access.

All public results (dimensions, representative order, class coordinates) are
deterministic.  Cohomology is computed per (model, degree) on demand and
memoized with bounded caches; insertion uses atomic insert-if-absent
semantics, so concurrent readers are safe.

Internally monomials are coded as flat int tuples (g0, e0, g1, e1, ...) over
the model's generator indices; coding keeps hashing and slicing cheap.
"""

from __future__ import annotations

import threading
from collections import OrderedDict
from fractions import Fraction
from typing import Callable

from . import linalg
from .algebra import Monomial, Polynomial, Q
from .model import SullivanModel

Coded = tuple[int, ...]  # flat (gen index, exponent) pairs

_Q0 = Q(0)
_Q1 = Q(1)


class NotACocycle(ValueError):
    pass


class _LRU:
    """Tiny thread-safe LRU map with insert-if-absent semantics."""

    def __init__(self, maxsize: int):
        self.maxsize = maxsize
        self._data: OrderedDict = OrderedDict()
        self._lock = threading.Lock()

    def get_or_create(self, key, factory: Callable):
        with self._lock:
            if key in self._data:
                self._data.move_to_end(key)
                return self._data[key]
        value = factory()
        with self._lock:
            if key not in self._data:
                self._data[key] = value
                while len(self._data) > self.maxsize:
                    self._data.popitem(last=False)
            return self._data[key]


class _Complex:
    """Integer-coded view of one model's cochain complex."""

    def __init__(self, model: SullivanModel):
        self.model = model
        self.gens = model.generators
        self.degs = tuple(g.degree for g in self.gens)
        self.odd = tuple(g.degree % 2 == 1 for g in self.gens)
        self._gi = {g.name: i for i, g in enumerate(self.gens)}
        self.diff_coded: dict[int, list[tuple[Coded, Fraction]]] = {}
        for i, g in enumerate(self.gens):
            dg = model.differential(g)
            if dg:
                self.diff_coded[i] = [(self.encode(m), c) for m, c in dg.terms()]
        self._bases = _LRU(8)
        self._indexes = _LRU(6)
        self._columns = _LRU(6)
        self._windows = _LRU(4)
        self._reach: tuple[bytes, ...] | None = None
        self._reach_max = -1

    # -- coding ----------------------------------------------------------------

    def encode(self, m: Monomial) -> Coded:
        out: list[int] = []
        for g, e in m.factors:
            out.append(self._gi[g.name])
            out.append(e)
        return tuple(out)

    def decode(self, coded: Coded) -> Monomial:
        return Monomial(
            tuple((self.gens[coded[i]], coded[i + 1]) for i in range(0, len(coded), 2))
        )

    def degree_of(self, coded: Coded) -> int:
        degs = self.degs
        return sum(degs[coded[i]] * coded[i + 1] for i in range(0, len(coded), 2))

    def mul_coded(self, a: Coded, b: Coded) -> tuple[int, Coded | None]:
        """Merge two coded words; returns (Koszul sign, word) or (0, None)."""
        if not a:
            return 1, b
        if not b:
            return 1, a
        odd = self.odd
        la = len(a)
        lb = len(b)
        # odd_tail[i] = number of odd letters of a at flat position >= i
        odd_tail = [0] * (la // 2 + 1)
        for k in range(la - 2, -2, -2):
            odd_tail[k // 2] = odd_tail[k // 2 + 1] + (1 if odd[a[k]] else 0)
        res: list[int] = []
        sign = 1
        i = j = 0
        while i < la or j < lb:
            if j >= lb or (i < la and a[i] < b[j]):
                res.append(a[i])
                res.append(a[i + 1])
                i += 2
            elif i >= la or b[j] < a[i]:
                g = b[j]
                if odd[g] and odd_tail[i // 2] % 2:
                    sign = -sign
                res.append(g)
                res.append(b[j + 1])
                j += 2
            else:
                g = a[i]
                if odd[g]:
                    return 0, None
                res.append(g)
                res.append(a[i + 1] + b[j + 1])
                i += 2
                j += 2
        return sign, tuple(res)

    def d_coded(self, mono: Coded) -> dict[Coded, Fraction]:
        """Coded Leibniz differential of a coded monomial."""
        diff = self.diff_coded
        degs = self.degs
        odd = self.odd
        out: dict[Coded, Fraction] = {}
        prefix_deg = 0
        for pos in range(0, len(mono), 2):
            g = mono[pos]
            dg = diff.get(g)
            if dg is not None:
                e = mono[pos + 1]
                sign = -1 if prefix_deg % 2 else 1
                if odd[g]:
                    rest = mono[:pos] + mono[pos + 2 :]
                    head = sign
                else:
                    rest = (
                        mono[:pos] + (g, e - 1) + mono[pos + 2 :]
                        if e > 1
                        else mono[:pos] + mono[pos + 2 :]
                    )
                    head = sign * e
                for dmon, c in dg:
                    s2, m2 = self.mul_coded(rest, dmon)
                    if s2:
                        acc = out.get(m2)
                        val = (acc if acc is not None else 0) + head * s2 * c
                        if val:
                            out[m2] = val
                        elif acc is not None:
                            del out[m2]
            prefix_deg += degs[mono[pos]] * mono[pos + 1]
        return out

    # -- bases -----------------------------------------------------------------

    def _reach_table(self, dmax: int):
        if self._reach is None or dmax > self._reach_max:
            dmax = max(dmax, 128)
            n = len(self.degs)
            reach = [bytearray(dmax + 1) for _ in range(n + 1)]
            reach[n][0] = 1
            for i in range(n - 1, -1, -1):
                d = self.degs[i]
                prev = reach[i + 1]
                cur = reach[i]
                if d % 2:
                    for m in range(dmax + 1):
                        cur[m] = prev[m] or (m >= d and prev[m - d])
                else:
                    for m in range(dmax + 1):
                        v = prev[m]
                        k = m - d
                        while not v and k >= 0:
                            v = prev[k]
                            k -= d
                        cur[m] = v
            self._reach = tuple(bytes(r) for r in reach)
            self._reach_max = dmax
        return self._reach

    def _build_basis(self, degree: int) -> tuple[Coded, ...]:
        reach = self._reach_table(degree)
        degs = self.degs
        n = len(degs)
        out: list[Coded] = []
        stack: list[int] = []

        def rec(i: int, rem: int) -> None:
            if rem == 0:
                out.append(tuple(stack))
                return
            if i == n or not reach[i][rem]:
                return
            d = degs[i]
            if d % 2:
                if d <= rem and reach[i + 1][rem - d]:
                    stack.append(i)
                    stack.append(1)
                    rec(i + 1, rem - d)
                    del stack[-2:]
                rec(i + 1, rem)
            else:
                nxt = reach[i + 1]
                for e in range(rem // d, 0, -1):
                    if nxt[rem - e * d]:
                        stack.append(i)
                        stack.append(e)
                        rec(i + 1, rem - e * d)
                        del stack[-2:]
                if nxt[rem]:
                    rec(i + 1, rem)

        rec(0, degree)
        return tuple(out)

    def basis(self, degree: int) -> tuple[Coded, ...]:
        if degree < 0:
            return ()
        return self._bases.get_or_create(degree, lambda: self._build_basis(degree))

    def index(self, degree: int) -> dict[Coded, int]:
        def build():
            b = self.basis(degree)
            return dict(zip(b, range(len(b))))

        return self._indexes.get_or_create(degree, build)

    def columns(self, degree: int) -> dict[int, list[tuple[int, Fraction]]]:
        """Sparse coboundary columns basis(degree) -> basis(degree + 1)."""
        if degree < 0:
            return {}
        return self._columns.get_or_create(degree, lambda: self._build_columns(degree))

    def _build_columns(self, degree: int) -> dict[int, list[tuple[int, Fraction]]]:
        active = self.diff_coded
        idx_up = self.index(degree + 1)
        cols: dict[int, list[tuple[int, Fraction]]] = {}
        d_coded = self.d_coded
        for i, mono in enumerate(self.basis(degree)):
            hit = False
            for p in range(0, len(mono), 2):
                if mono[p] in active:
                    hit = True
                    break
            if not hit:
                continue
            img = d_coded(mono)
            if img:
                cols[i] = sorted((idx_up[m], c) for m, c in img.items())
        return cols

    def window(self, degree: int) -> "_Window":
        return self._windows.get_or_create(degree, lambda: _Window(self, degree))


_COMPLEXES = _LRU(32)


def complex_for(model: SullivanModel) -> _Complex:
    return _COMPLEXES.get_or_create(model, lambda: _Complex(model))


class _Component:
    """One connected block of the window: active monomials at k-1, k, k+1.

    Boundary ranks (hence the local cohomology dimension) are computed
    eagerly; kernel and representative data only on first use.
    """

    __slots__ = (
        "rows_k",
        "loc",
        "cols_km1",
        "cols_k_members",
        "_cols_km1_src",
        "_cols_k_src",
        "img_rows",
        "img_pivots",
        "rank_out",
        "dim_h",
        "_h_rows",
        "_h_pivots",
    )

    def __init__(self, members_km1, members_k, cols_km1, cols_k):
        self.cols_km1 = sorted(m for m in members_km1 if m in cols_km1)
        self.rows_k = rows = sorted(members_k)
        self.loc = loc = {g: i for i, g in enumerate(rows)}
        self._cols_km1_src = cols_km1
        self._cols_k_src = cols_k
        n = len(rows)
        img_vecs = []
        for c in self.cols_km1:
            v = [_Q0] * n
            for r, val in cols_km1[c]:
                v[loc[r]] = val
            img_vecs.append(v)
        if len(img_vecs) == 1:  # single incoming column: normalize directly
            v = img_vecs[0]
            lead = next(i for i, x in enumerate(v) if x)
            if v[lead] != 1:
                inv = 1 / v[lead]
                v = [x * inv for x in v]
            self.img_rows = [v]
            self.img_pivots = [lead]
        elif img_vecs:
            red, piv, rk = linalg.rref(img_vecs)
            self.img_rows = red[:rk]
            self.img_pivots = piv
        else:
            self.img_rows = []
            self.img_pivots = []
        self.cols_k_members = members = [g for g in rows if g in cols_k]
        if len(members) == 1:
            rank_out = 1  # a stored column is nonzero by construction
        elif members:
            up_mat = self._outgoing_matrix()
            rank_out = linalg.rref(up_mat)[2] if up_mat else 0
        else:
            rank_out = 0
        self.rank_out = rank_out
        self.dim_h = n - rank_out - len(self.img_rows)
        self._h_rows = None
        self._h_pivots = None

    def _outgoing_matrix(self):
        """Dense matrix of the outgoing differential, rows = hit monomials at
        k+1, columns = this block's degree-k monomials (only nonzero ones)."""
        cols_k = self._cols_k_src
        up_rows: dict[int, int] = {}
        entries = []
        for g in self.cols_k_members:
            col = cols_k[g]
            for r, _ in col:
                if r not in up_rows:
                    up_rows[r] = len(up_rows)
            entries.append((self.loc[g], col))
        if not up_rows:
            return []
        mat = [[_Q0] * len(self.rows_k) for _ in range(len(up_rows))]
        for j, col in entries:
            for r, val in col:
                mat[up_rows[r]][j] = val
        return mat

    def _ensure_h(self):
        if self._h_rows is not None:
            return
        n = len(self.rows_k)
        up_mat = self._outgoing_matrix() if self.cols_k_members else []
        if up_mat:
            kernel = linalg.nullspace(up_mat, n)
        else:
            kernel = [[_Q1 if i == j else _Q0 for i in range(n)] for j in range(n)]
        reduced = [v for v in (self._reduce_by_image(k) for k in kernel) if any(v)]
        if reduced:
            red, piv, rk = linalg.rref(reduced)
            self._h_rows = red[:rk]
            self._h_pivots = piv
        else:
            self._h_rows = []
            self._h_pivots = []

    @property
    def h_rows(self):
        self._ensure_h()
        return self._h_rows

    @property
    def h_pivots(self):
        self._ensure_h()
        return self._h_pivots

    def _reduce_by_image(self, v: list[Fraction]) -> list[Fraction]:
        v = list(v)
        for row, p in zip(self.img_rows, self.img_pivots):
            f = v[p]
            if f:
                v = [x - f * y for x, y in zip(v, row)]
        return v

    def class_coords(self, v: list[Fraction]) -> list[Fraction]:
        """Coordinates over h_rows; raises NotACocycle if v is not in ker+im."""
        w = self._reduce_by_image(v)
        coords = []
        for row, p in zip(self.h_rows, self.h_pivots):
            f = w[p]
            coords.append(f)
            if f:
                w = [x - f * y for x, y in zip(w, row)]
        if any(w):
            raise NotACocycle("vector is not a cocycle of this complex")
        return coords

    def solve_preimage(self, v: list[Fraction]) -> dict[int, Fraction] | None:
        """u with (incoming differential)(u) = v, free variables zero."""
        if not self.cols_km1:
            return {} if not any(v) else None
        cols_km1 = self._cols_km1_src
        n = len(self.rows_k)
        mat = [[_Q0] * len(self.cols_km1) for _ in range(n)]
        for j, c in enumerate(self.cols_km1):
            for r, val in cols_km1[c]:
                mat[self.loc[r]][j] = val
        x = linalg.solve(mat, v)
        if x is None:
            return None
        return {c: xi for c, xi in zip(self.cols_km1, x) if xi}


class _Window:
    """Cohomology data of one model at one degree k (uses degrees k-1..k+1)."""

    def __init__(self, cx: _Complex, degree: int):
        self.cx = cx
        self.degree = degree
        k = degree
        cols_km1 = cx.columns(k - 1)
        cols_k = cx.columns(k)
        basis_k = cx.basis(k)
        # union-find over active monomials at degrees k-1, k, k+1
        parent: dict[tuple[int, int], tuple[int, int]] = {}

        def find(x):
            root = x
            while parent[root] != root:
                root = parent[root]
            while parent[x] != root:
                parent[x], x = root, parent[x]
            return root

        def union(x, y):
            parent.setdefault(x, x)
            parent.setdefault(y, y)
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[ry] = rx

        for c, col in cols_km1.items():
            a = (0, c)  # level 0 = degree k-1
            parent.setdefault(a, a)
            for r, _ in col:
                union(a, (1, r))
        for c, col in cols_k.items():
            a = (1, c)
            parent.setdefault(a, a)
            for r, _ in col:
                union(a, (2, r))
        groups: dict[tuple[int, int], list[tuple[int, int]]] = {}
        for node in parent:
            groups.setdefault(find(node), []).append(node)
        comp_items = sorted(
            groups.values(),
            key=lambda members: min((m for d, m in members if d == 1), default=-1),
        )
        comps: list[_Component] = []
        self.comp_of_k: dict[int, int] = {}
        for members in comp_items:
            mk = [m for d, m in members if d == 1]
            if not mk:
                continue  # component living entirely at k-1/k+1 contributes nothing
            comp = _Component(
                [m for d, m in members if d == 0], mk, cols_km1, cols_k
            )
            cid = len(comps)
            comps.append(comp)
            for m in mk:
                self.comp_of_k[m] = cid
        self.components = comps
        self.n_basis = len(basis_k)
        self.inert_count = self.n_basis - len(self.comp_of_k)
        self.dimension = self.inert_count + sum(c.dim_h for c in comps)
        # global class order: ascending anchor (inert monomial index, or the
        # component's smallest degree-k member index, with dim_h local slots)
        anchors: list[tuple[int, int]] = []  # (anchor index, comp id or -1)
        active = self.comp_of_k
        for cid, comp in enumerate(comps):
            if comp.dim_h:
                anchors.append((comp.rows_k[0], cid))
        for i in range(self.n_basis):
            if i not in active:
                anchors.append((i, -1))
        anchors.sort()
        self.class_pos: dict[tuple[int, int], int] = {}
        self.inert_pos: dict[int, int] = {}
        self.class_slots: list[tuple[int, int]] = []  # (comp id or -1, payload)
        pos = 0
        for anchor, cid in anchors:
            if cid < 0:
                self.inert_pos[anchor] = pos
                self.class_slots.append((-1, anchor))
                pos += 1
            else:
                for local_no in range(comps[cid].dim_h):
                    self.class_pos[(cid, local_no)] = pos
                    self.class_slots.append((cid, local_no))
                    pos += 1

    # -- queries ----------------------------------------------------------------

    def class_of_vec(self, vec: dict[int, Fraction]) -> dict[int, Fraction]:
        """Class coordinates (sparse, by class position) of a cocycle vector."""
        out: dict[int, Fraction] = {}
        by_comp: dict[int, dict[int, Fraction]] = {}
        for idx, val in vec.items():
            cid = self.comp_of_k.get(idx)
            if cid is None:
                out[self.inert_pos[idx]] = val
            else:
                by_comp.setdefault(cid, {})[idx] = val
        for cid, part in sorted(by_comp.items()):
            comp = self.components[cid]
            v = [_Q0] * len(comp.rows_k)
            for idx, val in part.items():
                v[comp.loc[idx]] = val
            for local_no, coord in enumerate(comp.class_coords(v)):
                if coord:
                    out[self.class_pos[(cid, local_no)]] = coord
        return out

    def solve_preimage_vec(self, vec: dict[int, Fraction]) -> dict[int, Fraction] | None:
        """u (sparse over basis(k-1)) with d(u) = vec, or None."""
        out: dict[int, Fraction] = {}
        by_comp: dict[int, dict[int, Fraction]] = {}
        for idx, val in vec.items():
            cid = self.comp_of_k.get(idx)
            if cid is None:
                return None  # inert monomials are never coboundaries
            by_comp.setdefault(cid, {})[idx] = val
        for cid, part in sorted(by_comp.items()):
            comp = self.components[cid]
            v = [_Q0] * len(comp.rows_k)
            for idx, val in part.items():
                v[comp.loc[idx]] = val
            u = comp.solve_preimage(v)
            if u is None:
                return None
            out.update(u)
        return out

    def image_rank(self) -> int:
        return sum(len(c.img_rows) for c in self.components)

    def image_rank_outside(self, keep_row: Callable[[int], bool]) -> int:
        """Rank of (projection onto rows failing keep_row) ∘ incoming d."""
        total = 0
        for comp in self.components:
            if not comp.img_rows:
                continue
            sel = [i for i, g in enumerate(comp.rows_k) if not keep_row(g)]
            if not sel:
                continue
            total += linalg.rank([[row[i] for i in sel] for row in comp.img_rows])
        return total

    def representative_vec(self, pos: int) -> dict[int, Fraction]:
        cid, payload = self.class_slots[pos]
        if cid < 0:
            return {payload: _Q1}
        comp = self.components[cid]
        row = comp.h_rows[payload]
        return {comp.rows_k[i]: v for i, v in enumerate(row) if v}


# --- public API ---------------------------------------------------------------


class CohomologyBasis:
    """Basis of H^k(model): deterministic representatives and coordinates."""

    __slots__ = ("model", "degree", "dimension", "_window", "_cx")

    def __init__(self, model: SullivanModel, degree: int):
        self.model = model
        self.degree = degree
        cx = complex_for(model)
        self._cx = cx
        self._window = cx.window(degree)
        self.dimension = self._window.dimension

    def representative(self, i: int) -> Polynomial:
        vec = self._window.representative_vec(i)
        b = self._cx.basis(self.degree)
        return Polynomial({self._cx.decode(b[idx]): c for idx, c in vec.items()})

    def representatives(self) -> list[Polynomial]:
        return [self.representative(i) for i in range(self.dimension)]

    def class_of(self, p: Polynomial) -> "CohomologyClass":
        if p and p.homogeneous_degree() != self.degree:
            raise NotACocycle(
                f"polynomial has degree {p.homogeneous_degree()}, expected {self.degree}"
            )
        if self.model.d(p):
            raise NotACocycle(f"d(p) = {self.model.d(p)} != 0")
        index = self._cx.index(self.degree)
        vec = {index[self._cx.encode(m)]: c for m, c in p.terms()}
        return CohomologyClass(self, self._window.class_of_vec(vec))

    def linear_parts(self) -> dict[int, dict[str, Fraction]]:
        """Sparse map class position -> {generator name: coefficient}.

        Only classes whose representatives contain single-generator monomials
        appear; this is the data of the projection onto indecomposables.
        """
        gens = self.model.gens_of_degree(self.degree)
        if not gens:
            return {}
        index = self._cx.index(self.degree)
        out: dict[int, dict[str, Fraction]] = {}
        win = self._window
        for g in gens:
            gidx = index[self._cx.encode(Monomial(((g, 1),)))]
            cid = win.comp_of_k.get(gidx)
            if cid is None:
                out.setdefault(win.inert_pos[gidx], {})[g.name] = _Q1
            else:
                comp = win.components[cid]
                loc = comp.loc[gidx]
                for local_no, row in enumerate(comp.h_rows):
                    if row[loc]:
                        pos = win.class_pos[(cid, local_no)]
                        out.setdefault(pos, {})[g.name] = row[loc]
        return out

    def __repr__(self) -> str:
        return f"H^{self.degree}({self.model.label}), dim {self.dimension}"


class CohomologyClass:
    """Element of a CohomologyBasis, stored as sparse coordinates."""

    __slots__ = ("basis", "coords")

    def __init__(self, basis: CohomologyBasis, coords: dict[int, Fraction]):
        self.basis = basis
        self.coords = {k: v for k, v in sorted(coords.items()) if v}

    def vector(self) -> list[Fraction]:
        v = [_Q0] * self.basis.dimension
        for i, c in self.coords.items():
            v[i] = c
        return v

    def is_zero(self) -> bool:
        return not self.coords

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CohomologyClass)
            and self.basis.model == other.basis.model
            and self.basis.degree == other.basis.degree
            and self.coords == other.coords
        )

    def __repr__(self) -> str:
        return f"CohomologyClass({self.coords} in {self.basis!r})"


def cohomology(m: SullivanModel, k: int) -> CohomologyBasis:
    """H^k(m) with deterministic representatives (echelon per component)."""
    if k < 0:
        raise ValueError("cohomology degree must be >= 0")
    return CohomologyBasis(m, k)


def class_of(m: SullivanModel, k: int, p: Polynomial) -> CohomologyClass:
    return cohomology(m, k).class_of(p)


def coboundary_matrix(m: SullivanModel, k: int) -> list[list[Fraction]]:
    """Dense matrix of d: degree k -> k+1 over the monomial bases."""
    if k < 0:
        raise ValueError("degree must be >= 0")
    cx = complex_for(m)
    n_rows = len(cx.basis(k + 1))
    n_cols = len(cx.basis(k))
    mat = [[_Q0] * n_cols for _ in range(n_rows)]
    for c, col in cx.columns(k).items():
        for r, val in col:
            mat[r][c] = val
    return mat


def image_rank(m: SullivanModel, k: int) -> int:
    """rank of d: degree k-1 -> k (dimension of the coboundary space)."""
    return complex_for(m).window(k).image_rank()


def image_rank_outside_cutoff(m: SullivanModel, k: int, cutoff: int) -> int:
    """rank of the coboundary map followed by projection onto monomials
    having a factor of degree > cutoff."""
    cx = complex_for(m)
    win = cx.window(k)
    basis_k = cx.basis(k)
    degs = cx.degs

    def keep(idx: int) -> bool:  # True: row lies inside Lambda V^{<=cutoff}
        mono = basis_k[idx]
        return all(degs[mono[p]] <= cutoff for p in range(0, len(mono), 2))

    return win.image_rank_outside(keep)


def solve_coboundary(m: SullivanModel, k: int, rhs: Polynomial) -> Polynomial | None:
    """u of degree k-1 with d(u) = rhs (free variables zero), or None."""
    if rhs.is_zero():
        return Polynomial.zero()
    if rhs.homogeneous_degree() != k:
        raise ValueError(f"rhs has degree {rhs.homogeneous_degree()}, expected {k}")
    cx = complex_for(m)
    index = cx.index(k)
    try:
        vec = {index[cx.encode(mono)]: c for mono, c in rhs.terms()}
    except KeyError:
        raise ValueError("rhs contains monomials outside the model")
    u = cx.window(k).solve_preimage_vec(vec)
    if u is None:
        return None
    b = cx.basis(k - 1)
    return Polynomial({cx.decode(b[i]): c for i, c in u.items()})


def induced_map(f, k: int) -> list[list[Fraction]]:
    """Matrix of H^k(f) from source classes to target class coordinates."""
    src = cohomology(f.source, k)
    tgt = cohomology(f.target, k)
    cols = []
    for i in range(src.dimension):
        image = f.apply(src.representative(i))
        cols.append(tgt.class_of(image).vector())
    return [[cols[j][i] for j in range(src.dimension)] for i in range(tgt.dimension)]


def pair_cohomology_dim(m: SullivanModel, n: int, k: int) -> int:
    """dim H^k of the quotient complex of the pair (ΛV^{<=n+1}; ΛV^{<=n-1}).

    The quotient is realized by basis filtering: monomials of ΛV^{<=n+1}
    containing at least one factor of degree in (n-1, n+1], with the
    differential followed by projection back onto such monomials.
    """
    sub = m.truncate(n + 1)
    cx = complex_for(sub)
    degs = cx.degs

    def in_quotient(mono: Coded) -> bool:
        return any(n - 1 < degs[mono[p]] <= n + 1 for p in range(0, len(mono), 2))

    def filtered_rank(deg: int) -> int:
        basis_lo = cx.basis(deg)
        basis_up = cx.basis(deg + 1)
        rows: dict[int, int] = {}
        cols = []
        columns = cx.columns(deg)
        for i, mono in enumerate(basis_lo):
            if not in_quotient(mono):
                continue
            col = columns.get(i, [])
            entries = [(r, v) for r, v in col if in_quotient(basis_up[r])]
            if entries:
                for r, _ in entries:
                    rows.setdefault(r, len(rows))
                cols.append(entries)
        if not cols:
            return 0
        mat = [[_Q0] * len(cols) for _ in range(len(rows))]
        for j, entries in enumerate(cols):
            for r, v in entries:
                mat[rows[r]][j] = v
        return linalg.rank(mat)

    n_k = sum(1 for mono in cx.basis(k) if in_quotient(mono))
    return n_k - filtered_rank(k) - filtered_rank(k - 1)
