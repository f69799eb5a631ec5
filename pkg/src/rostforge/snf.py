"""Integer matrices: Smith normal form, kernels, subquotients, lattices.

Matrices are lists of rows of Python ints.
"""

from __future__ import annotations

from dataclasses import dataclass


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a, b):
    if not a:
        return []
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [0] * cols
        for k, x in enumerate(row):
            if x:
                for j, y in enumerate(b[k]):
                    if y:
                        acc[j] += x * y
        out.append(acc)
    return out


def _xgcd(a, b):
    """(g, s, t) with s*a + t*b = g >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


@dataclass(frozen=True)
class SmithForm:
    """m = U * D * V with U, V unimodular; ``*_inv`` are their inverses."""

    factors: tuple
    U: list
    D: list
    V: list
    U_inv: list
    V_inv: list

    @property
    def rank(self):
        return len(self.factors)


class _Work:
    def __init__(self, m):
        self.r = len(m)
        self.c = len(m[0]) if m else 0
        self.D = [list(row) for row in m]
        self.U = identity(self.r)
        self.Ui = identity(self.r)
        self.V = identity(self.c)
        self.Vi = identity(self.c)

    # rows i, j <- (s*ri + t*rj, u*ri + v*rj), s*v - t*u = +-1
    def rows(self, i, j, s, t, u, v):
        D = self.D
        D[i], D[j] = ([s * a + t * b for a, b in zip(D[i], D[j])],
                      [u * a + v * b for a, b in zip(D[i], D[j])])
        Ui = self.Ui
        Ui[i], Ui[j] = ([s * a + t * b for a, b in zip(Ui[i], Ui[j])],
                        [u * a + v * b for a, b in zip(Ui[i], Ui[j])])
        det = s * v - t * u
        # inverse of [[s,t],[u,v]] is det * [[v,-t],[-u,s]]
        for row in self.U:
            a, b = row[i], row[j]
            row[i], row[j] = det * (v * a - u * b), det * (-t * a + s * b)

    def cols(self, i, j, s, t, u, v):
        for row in self.D:
            a, b = row[i], row[j]
            row[i], row[j] = s * a + t * b, u * a + v * b
        for row in self.Vi:
            a, b = row[i], row[j]
            row[i], row[j] = s * a + t * b, u * a + v * b
        det = s * v - t * u
        V = self.V
        V[i], V[j] = ([det * (v * a - u * b) for a, b in zip(V[i], V[j])],
                      [det * (-t * a + s * b) for a, b in zip(V[i], V[j])])


def smith_normal_form(m):
    """Smith normal form of an integer matrix, with verified transforms."""
    w = _Work(m)
    D = w.D
    r, c = w.r, w.c
    for k in range(min(r, c)):
        best = None
        for i in range(k, r):
            row = D[i]
            for j in range(k, c):
                a = row[j]
                if a and (best is None or abs(a) < best[0]):
                    best = (abs(a), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        if pi != k:
            w.rows(k, pi, 0, 1, 1, 0)
        if pj != k:
            w.cols(k, pj, 0, 1, 1, 0)
        while True:
            changed = False
            for i in range(k + 1, r):
                if D[i][k]:
                    a, b = D[k][k], D[i][k]
                    if b % a == 0:
                        w.rows(k, i, 1, 0, -(b // a), 1)
                    else:
                        g, s, t = _xgcd(a, b)
                        w.rows(k, i, s, t, -b // g, a // g)
                    changed = True
            for j in range(k + 1, c):
                if D[k][j]:
                    a, b = D[k][k], D[k][j]
                    if b % a == 0:
                        w.cols(k, j, 1, 0, -(b // a), 1)
                    else:
                        g, s, t = _xgcd(a, b)
                        w.cols(k, j, s, t, -b // g, a // g)
                    changed = True
            if changed:
                continue
            if abs(D[k][k]) == 1:
                break
            bad = next(((i, j) for i in range(k + 1, r) for j in range(k + 1, c)
                        if D[i][j] % D[k][k]), None)
            if bad is None:
                break
            w.rows(k, bad[0], 1, 1, 0, 1)
        if D[k][k] < 0:
            _negate_row(w, k)
    factors = tuple(D[i][i] for i in range(min(r, c)) if D[i][i])
    form = SmithForm(factors, w.U, w.D, w.V, w.Ui, w.Vi)
    if m and matmul(matmul(form.U, form.D), form.V) != [list(row) for row in m]:
        raise AssertionError("Smith normal form reconstruction failed")  # pragma: no cover
    return form


def _negate_row(w, k):
    w.D[k] = [-a for a in w.D[k]]
    w.Ui[k] = [-a for a in w.Ui[k]]
    for row in w.U:
        row[k] = -row[k]


def kernel_basis(m, ncols=None):
    """Z-basis of {x : m x = 0} as a list of vectors."""
    if not m:
        n = ncols or 0
        return identity(n)
    form = smith_normal_form(m)
    n = len(m[0])
    rank = form.rank
    # m x = 0  <=>  D (V x) = 0  <=>  (V x)_j = 0 for j < rank
    return [[form.V_inv[i][j] for i in range(n)] for j in range(rank, n)]


def cokernel(m, nrows):
    """(torsion invariant factors > 1, free rank) of Z^nrows / image(m)."""
    if not m or not m[0]:
        return (), nrows
    form = smith_normal_form(m)
    torsion = tuple(d for d in form.factors if d > 1)
    return torsion, nrows - form.rank


def subquotient(basis, relations):
    """Structure of span(basis) / span(relations), relations inside span(basis).

    Returns (torsion invariant factors > 1, free rank).
    """
    k = len(basis)
    if k == 0:
        return (), 0
    coords = []
    for rel in relations:
        x = _solve_integer(basis, rel)
        if x is None:
            raise ValueError("relation does not lie in the span of the basis")
        coords.append(x)
    if not coords:
        return (), k
    # columns = relations expressed in the basis
    mat = [[coords[j][i] for j in range(len(coords))] for i in range(k)]
    return cokernel(mat, k)


def _solve_integer(basis, target):
    """Integer x with sum x_i basis_i = target, or None."""
    cols = [[b[i] for b in basis] for i in range(len(target))]
    form = smith_normal_form(cols)
    # cols x = target  <=>  D (V x) = U^{-1} target
    y = [sum(form.U_inv[i][j] * target[j] for j in range(len(target))) for i in range(len(target))]
    z = []
    for i in range(len(basis)):
        d = form.D[i][i] if i < len(form.D) and i < len(form.D[0]) else 0
        if d == 0:
            if i < len(y) and y[i]:
                return None
            z.append(0)
        else:
            if y[i] % d:
                return None
            z.append(y[i] // d)
    if any(y[i] for i in range(len(basis), len(y))):
        return None
    return [sum(form.V_inv[i][j] * z[j] for j in range(len(z))) for i in range(len(basis))]


class Lattice:
    """Incrementally maintained echelon basis of a sublattice of Z^n."""

    def __init__(self, dim):
        self.dim = dim
        self.rows = {}

    def _lead(self, v):
        return next((i for i, a in enumerate(v) if a), None)

    def add(self, v):
        v = list(v)
        while True:
            p = self._lead(v)
            if p is None:
                return
            row = self.rows.get(p)
            if row is None:
                self.rows[p] = v if v[p] > 0 else [-a for a in v]
                return
            a, b = row[p], v[p]
            if b % a == 0:
                q = b // a
                v = [x - q * y for x, y in zip(v, row)]
                continue
            g, s, t = _xgcd(a, b)
            new_row = [s * x + t * y for x, y in zip(row, v)]
            v = [(b // g) * x - (a // g) * y for x, y in zip(row, v)]
            self.rows[p] = new_row

    def contains(self, v):
        v = list(v)
        while True:
            p = self._lead(v)
            if p is None:
                return True
            row = self.rows.get(p)
            if row is None or v[p] % row[p]:
                return False
            q = v[p] // row[p]
            v = [x - q * y for x, y in zip(v, row)]

    def is_full(self):
        """True when the lattice is all of Z^dim."""
        return len(self.rows) == self.dim and all(r[p] == 1 for p, r in self.rows.items())
