"""Derivation algebras and nonexistence evidence for quotient algebras.

Covers the one-dimensional central quotients: the 2-step algebra modulo
<[a,b] + [c,d]> for a distinct vertex quadruple with edges ab, cd, ac, ad,
and the 3-step algebra modulo a nonzero central degree-3 vector.  Both
families are predicted to admit no hyperbolic automorphism with integer
characteristic polynomial and unit constant term; `hyperbolic_search`
hunts for counterexamples over a bounded box and is expected to come back
empty.

Derivations of these algebras are computed from their degree-one
restrictions: the algebras are generated in degree one, so a derivation is
determined by a linear map V -> H, and such a map extends exactly when its
Leibniz image kills every defining relation.  That turns Der into the
kernel of a small exact linear system, graded by how far the map shifts
degrees.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .graphs import coherent_components
from .intpoly import IntPolynomial
from .liealg import build_graded_quotient, non_edge_relations, quotient_algebra
from .lyndon import standard_factorization
from .spectra import unit_root_free
from .anosov import ExtensionError, extend_to_algebra


class SpecError(ValueError):
    """A quotient specification failed validation."""


@dataclass(frozen=True)
class QuotientSpec:
    """One-dimensional central quotient data.

    step 2: X = [alpha,beta] + [gamma,delta] for the named vertex quadruple
    (unit coefficients only; generalized coefficients are rejected).
    step 3: X is a nonzero rational vector over the degree-3 basis words of
    the 3-step graph algebra, given as ((word labels tuple, coeff), ...).
    """

    step: int
    vertices: tuple = None
    vector: tuple = None

    def validate(self, graph):
        if self.step == 2:
            if not self.vertices or len(self.vertices) != 4:
                raise SpecError("step-2 spec needs exactly four vertices")
            try:
                a, b, c, d = (graph.index[v] for v in self.vertices)
            except KeyError as e:
                raise SpecError(f"unknown vertex {e.args[0]!r}") from None
            if len({a, b, c, d}) != 4:
                raise SpecError("the four vertices must be distinct")
            names = dict(zip("alpha beta gamma delta".split(), self.vertices))
            for u, v, which in ((a, b, "alpha beta"), (c, d, "gamma delta"),
                                (a, c, "alpha gamma"), (a, d, "alpha delta")):
                if not graph.adjacent(u, v):
                    raise SpecError(f"required edge {which} is missing")
            return (a, b, c, d)
        if self.step == 3:
            if not self.vector:
                raise SpecError("step-3 spec needs a nonzero degree-3 vector")
            q = quotient_algebra(graph, 3)
            words3 = set(q.basis_words[3])
            coeffs = {}
            for labels, c in self.vector:
                word = tuple(graph.index[l] for l in labels)
                if word not in words3:
                    raise SpecError(
                        f"{'.'.join(labels)} is not a degree-3 basis word of this algebra"
                    )
                coeffs[word] = coeffs.get(word, Fraction(0)) + Fraction(c)
            coeffs = {w: c for w, c in coeffs.items() if c}
            if not coeffs:
                raise SpecError("the degree-3 vector X must be nonzero")
            return coeffs
        raise SpecError(f"step must be 2 or 3, not {self.step}")

    @classmethod
    def from_json(cls, data):
        step = data.get("step")
        if step == 2:
            try:
                vs = tuple(data[name] for name in ("alpha", "beta", "gamma", "delta"))
            except KeyError as e:
                raise SpecError(f"missing field {e.args[0]!r}") from None
            return cls(step=2, vertices=vs)
        if step == 3:
            vec = data.get("vector")
            if not isinstance(vec, dict) or not vec:
                raise SpecError("step-3 spec needs a nonempty 'vector' object")
            entries = []
            for word, c in sorted(vec.items()):
                labels = tuple(word.split("."))
                if isinstance(c, str):
                    num, _, den = c.partition("/")
                    c = Fraction(int(num), int(den) if den else 1)
                entries.append((labels, Fraction(c)))
            return cls(step=3, vector=tuple(entries))
        raise SpecError("spec 'step' must be 2 or 3")


def _step2_relation(graph, indices):
    a, b, c, d = indices
    rel = {}
    for u, v in ((a, b), (c, d)):
        if u < v:
            rel[(u, v)] = rel.get((u, v), Fraction(0)) + 1
        else:
            rel[(v, u)] = rel.get((v, u), Fraction(0)) - 1
    return rel


def build_quotient(graph, spec):
    """The graph algebra modulo the one-dimensional central ideal <X>."""
    payload = spec.validate(graph)
    if spec.step == 2:
        rel = _step2_relation(graph, payload)
        gens = non_edge_relations(graph) + [(2, rel)]
        algebra = build_graded_quotient(graph.vertices, 2, gens, graph=graph)
        base = quotient_algebra(graph, 2)
        if algebra.dims[1] != base.dims[1] - 1:
            raise SpecError("X is not independent of the edge ideal")
        return algebra
    gens = non_edge_relations(graph) + [(3, payload)]
    algebra = build_graded_quotient(graph.vertices, 3, gens, graph=graph)
    base = quotient_algebra(graph, 3)
    if algebra.dims[2] != base.dims[2] - 1:
        raise SpecError("X vanishes in the 3-step algebra")
    return algebra


# -- derivations --------------------------------------------------------------


def _class_vector_full(algebra, word, cache):
    if word not in cache:
        vec = [Fraction(0)] * algebra.dim
        m = len(word)
        base = algebra.offsets[m]
        for pos, c in enumerate(algebra.class_of_word(word)):
            vec[base + pos] = c
        cache[word] = vec
    return cache[word]


def _leibniz_image(algebra, rel, f_of_generator, cache):
    """Apply the derivation determined by generator images to a relation.

    rel is {free word: coeff}; f_of_generator(i) returns the image vector
    of generator i.  Recurses through standard factorizations, bracketing
    in the quotient.
    """

    def d_word(w):
        if len(w) == 1:
            return f_of_generator(w[0])
        u, v = standard_factorization(w)
        du, dv = d_word(u), d_word(v)
        out = [Fraction(0)] * algebra.dim
        if du is not None and any(du):
            for i, c in enumerate(algebra.bracket(du, _class_vector_full(algebra, v, cache))):
                out[i] += c
        if dv is not None and any(dv):
            for i, c in enumerate(algebra.bracket(_class_vector_full(algebra, u, cache), dv)):
                out[i] += c
        return out

    total = [Fraction(0)] * algebra.dim
    for w, c in rel.items():
        img = d_word(w)
        if img is not None:
            for i, x in enumerate(img):
                total[i] += Fraction(c) * x
    return total


def _weight_kernel(algebra, target_degree, conditions):
    """Solutions f: V -> H_target of all Leibniz conditions.

    conditions: list of (rel_dict, mod_rows, mod_pivots); each Leibniz
    image is reduced modulo the given row space and must vanish.
    Returns a list of n x dim_target coefficient matrices.
    """
    n = len(algebra.generators)
    dim_t = algebra.dims[target_degree - 1]
    if dim_t == 0:
        return []
    base = algebra.offsets[target_degree]
    nunk = n * dim_t
    cache = {}
    columns = []
    zero = [Fraction(0)] * algebra.dim
    for j in range(n):
        for p in range(dim_t):
            unit = list(zero)
            unit[base + p] = Fraction(1)

            def f(i, _j=j, _u=unit):
                return _u if i == _j else None

            col = []
            for rel, mod_rows, mod_pivots in conditions:
                img = _leibniz_image(algebra, rel, f, cache)
                if mod_rows:
                    img = linalg.reduce_mod_rows(mod_rows, mod_pivots, img)
                col.extend(img)
            columns.append(col)
    if not columns or not columns[0]:
        rows = []
    else:
        rows = [[columns[u][e] for u in range(nunk)] for e in range(len(columns[0]))]
    kernel = linalg.kernel_basis(rows, nunk) if rows else [
        [Fraction(1) if t == s else Fraction(0) for t in range(nunk)] for s in range(nunk)
    ]
    out = []
    for vec in kernel:
        mat = [[Fraction(0)] * n for _ in range(dim_t)]
        for j in range(n):
            for p in range(dim_t):
                mat[p][j] = vec[j * dim_t + p]
        out.append(mat)
    return out


@dataclass
class DerivationAlgebra:
    ambient_dim: int
    basis: list  # full square matrices satisfying the Leibniz identity
    weights: list  # degree shift of each basis element

    @property
    def dimension(self):
        return len(self.basis)


def _reconstruct_matrix(algebra, target_degree, coeffs):
    """Full matrix of the derivation with generator images in one degree."""
    n = len(algebra.generators)
    base = algebra.offsets[target_degree]
    images = []
    for j in range(n):
        vec = [Fraction(0)] * algebra.dim
        for p in range(algebra.dims[target_degree - 1]):
            vec[base + p] = coeffs[p][j]
        images.append(vec)
    cache = {}

    def f(i):
        return images[i]

    mat = [[Fraction(0)] * algebra.dim for _ in range(algebra.dim)]
    for col in range(algebra.dim):
        w = algebra.word_of(col)
        img = _leibniz_image(algebra, {w: Fraction(1)}, f, cache)
        for row in range(algebra.dim):
            mat[row][col] = img[row]
    return mat


def derivation_algebra(algebra, v_stable=False):
    """Basis of Der(A): all D with D[x,y] = [Dx,y] + [x,Dy].

    The algebra is generated in degree one, so solutions are parametrized
    by generator images; with v_stable=True only maps with D(V) inside V
    are kept (the degree-preserving weight-zero part).
    """
    conditions = [(rel, [], []) for _, rel in algebra.relation_generators]
    basis, weights = [], []
    top = 1 if v_stable else algebra.k
    for t in range(1, top + 1):
        for coeffs in _weight_kernel(algebra, t, conditions):
            basis.append(_reconstruct_matrix(algebra, t, coeffs))
            weights.append(t - 1)
    return DerivationAlgebra(ambient_dim=algebra.dim, basis=basis, weights=weights)


def _v_restrictions(algebra, conditions):
    """Weight-zero solutions as n x n matrices on the vertex space."""
    return _weight_kernel(algebra, 1, conditions)


# -- Proposition 5.3 / 5.4 evidence -------------------------------------------


def _flatten(mat):
    return [x for row in mat for x in row]


def _unit_endo(n, i, j):
    m = [[Fraction(0)] * n for _ in range(n)]
    m[i][j] = Fraction(1)
    return m


def _family_intersection(algebra, conditions, family):
    """Basis of span(family) meeting the derivation conditions."""
    if not family:
        return []
    n = len(algebra.generators)
    cache = {}
    cols = []
    for mat in family:
        images = [[Fraction(0)] * algebra.dim for _ in range(n)]
        for j in range(n):
            for i in range(n):
                images[j][i] = mat[i][j]
        col = []
        for rel, mod_rows, mod_pivots in conditions:
            img = _leibniz_image(algebra, rel, lambda i, _im=images: _im[i], cache)
            if mod_rows:
                img = linalg.reduce_mod_rows(mod_rows, mod_pivots, img)
            col.extend(img)
        cols.append(col)
    rows = [[cols[u][e] for u in range(len(family))] for e in range(len(cols[0]))]
    if not rows:
        kernel = [[Fraction(1) if t == s else Fraction(0) for t in range(len(family))]
                  for s in range(len(family))]
    else:
        kernel = linalg.kernel_basis(rows, len(family))
    out = []
    for vec in kernel:
        acc = [[Fraction(0)] * n for _ in range(n)]
        for c, mat in zip(vec, family):
            if c:
                for i in range(n):
                    for j in range(n):
                        acc[i][j] += c * mat[i][j]
        out.append(acc)
    return out


@dataclass
class SpanReport:
    ok: bool
    dim_total: int
    families: dict  # name -> {"dim": int, "members": [...]}
    missing_from_families: list  # witnesses, if containment fails
    missing_from_computed: list

    def to_json(self):
        return {
            "ok": self.ok,
            "dim_v_stable_derivations": self.dim_total,
            "families": {k: {"dim": v["dim"]} for k, v in sorted(self.families.items())},
            "missing_from_families": [
                [[str(x) for x in row] for row in m] for m in self.missing_from_families
            ],
            "missing_from_computed": [
                [[str(x) for x in row] for row in m] for m in self.missing_from_computed
            ],
        }


def span_report(graph, spec):
    """Check the predicted spanning families against the computed algebra
    of V-stabilizing derivations of the step-2 quotient, both ways.

    A containment failure is surfaced with an explicit witness matrix.
    """
    if spec.step != 2:
        raise SpecError("span_report applies to step-2 quotient specs")
    a, b, c, d = spec.validate(graph)
    algebra = build_quotient(graph, spec)
    n = graph.n
    conditions = [(rel, [], []) for _, rel in algebra.relation_generators]
    computed = _v_restrictions(algebra, conditions)
    sprime = {a, b, c, d}
    outside = [v for v in range(n) if v not in sprime]

    families = {}

    def put(name, members):
        families[name] = {"dim": len(members), "members": members}

    put("diagonal", _family_intersection(
        algebra, conditions, [_unit_endo(n, i, i) for i in range(n)]))
    for name, (p, q, r, s) in {
        "W_alpha_delta__gamma_beta": (a, d, c, b),
        "W_beta_gamma__delta_alpha": (b, c, d, a),
        "W_alpha_gamma__delta_beta": (a, c, d, b),
        "W_gamma_alpha__beta_delta": (c, a, b, d),
    }.items():
        put(name, _family_intersection(
            algebra, conditions, [_unit_endo(n, p, q), _unit_endo(n, r, s)]))
    for name, pairs in {
        "type_i": [(e, z) for e in outside for z in outside if e != z],
        "type_ii": [(e, z) for e in sprime for z in outside],
        "type_iii": [(e, z) for e in outside for z in sprime],
        "type_iv": [(a, b), (c, d), (b, a), (d, c)],
    }.items():
        members = []
        for (e, z) in pairs:
            members.extend(_family_intersection(algebra, conditions, [_unit_endo(n, e, z)]))
        put(name, members)

    family_rows = [_flatten(m) for fam in families.values() for m in fam["members"]]
    fam_rref, fam_pivots = linalg.rref(family_rows, n * n) if family_rows else ([], [])
    comp_rref, comp_pivots = linalg.rref([_flatten(m) for m in computed], n * n) \
        if computed else ([], [])

    missing_from_families = [
        m for m in computed
        if not linalg.in_row_space(fam_rref, fam_pivots, _flatten(m))
    ]
    missing_from_computed = [
        m for fam in families.values() for m in fam["members"]
        if not linalg.in_row_space(comp_rref, comp_pivots, _flatten(m))
    ]
    return SpanReport(
        ok=not missing_from_families and not missing_from_computed,
        dim_total=len(computed),
        families=families,
        missing_from_families=missing_from_families,
        missing_from_computed=missing_from_computed,
    )


def lift_check(graph, spec):
    """Infinitesimal lift surjectivity for the step-2 quotient.

    Compares V-stabilizing derivations of the quotient against derivations
    of the unquotiented algebra that keep <X> invariant; the proposition
    predicts the restriction map is onto, i.e. equal dimensions.
    """
    if spec.step != 2:
        raise SpecError("lift_check applies to step-2 quotient specs")
    indices = spec.validate(graph)
    quotient = build_quotient(graph, spec)
    q_conditions = [(rel, [], []) for _, rel in quotient.relation_generators]
    dim_quotient = len(_v_restrictions(quotient, q_conditions))

    base = quotient_algebra(graph, 2)
    xrel = _step2_relation(graph, indices)
    x_class = [Fraction(0)] * base.dim
    for pos, coeff in enumerate(base.reduce_free(2, xrel)):
        x_class[base.offsets[2] + pos] = coeff
    mod_rows, mod_pivots = linalg.rref([x_class], base.dim)
    conditions = [(rel, [], []) for _, rel in base.relation_generators]
    conditions.append((xrel, mod_rows, mod_pivots))
    lifted = _v_restrictions(base, conditions)

    # every lift restricts to a quotient derivation; onto-ness is the claim
    q_basis = _v_restrictions(quotient, q_conditions)
    q_rref, q_pivots = linalg.rref([_flatten(m) for m in q_basis], graph.n ** 2) \
        if q_basis else ([], [])
    for m in lifted:
        if not linalg.in_row_space(q_rref, q_pivots, _flatten(m)):
            return False
    return len(lifted) == dim_quotient


# -- bounded nonexistence search ----------------------------------------------


@dataclass
class SearchFinding:
    matrix: list
    char_poly: list
    certificate: dict
    degree_blocks: dict

    def to_json(self):
        return {
            "matrix": self.matrix,
            "char_poly": self.char_poly,
            "certificate": self.certificate,
            "degree_blocks": {str(m): b for m, b in sorted(self.degree_blocks.items())},
        }


def _char_poly_qq(block):
    """Berkowitz over exact rationals, ascending coefficients."""
    n = len(block)
    if n == 0:
        return [Fraction(1)]
    a = [[Fraction(x) for x in row] for row in block]
    p = [Fraction(1)]
    for r in range(1, n + 1):
        arr = a[r - 1][r - 1]
        row = a[r - 1][: r - 1]
        col = [a[i][r - 1] for i in range(r - 1)]
        sub = [a[i][: r - 1] for i in range(r - 1)]
        t = [Fraction(1), -arr]
        vec = col
        for _ in range(r - 1):
            t.append(-sum(x * y for x, y in zip(row, vec)))
            vec = [sum(sub[i][j] * vec[j] for j in range(r - 1)) for i in range(r - 1)]
        p = [sum(t[i - j] * p[j] for j in range(max(0, i - len(t) + 1), min(i + 1, len(p))))
             for i in range(r + 1)]
    return list(reversed(p))


def _poly_mul_qq(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _signed_permutations(n):
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product((1, -1), repeat=n):
            m = [[0] * n for _ in range(n)]
            for j in range(n):
                m[perm[j]][j] = signs[j]
            yield m


def _box_unimodular(d, bound):
    for entries in itertools.product(range(-bound, bound + 1), repeat=d * d):
        m = [list(entries[i * d:(i + 1) * d]) for i in range(d)]
        if linalg.det_bareiss(m) in (1, -1):
            yield m


_BLOCK_PHASE_RAW_LIMIT = 10 ** 6


def _block_diagonal_candidates(graph, bound, cap):
    """Class-respecting block-diagonal candidates, the structured phase.

    Skipped entirely when some class's raw coefficient box is too large to
    sweep; the random phase still covers those graphs.
    """
    partition = coherent_components(graph)
    per_class = []
    for cls in partition.classes:
        d = len(cls)
        if (2 * bound + 1) ** (d * d) > _BLOCK_PHASE_RAW_LIMIT:
            return
        per_class.append(list(_box_unimodular(d, bound)))
    n = graph.n
    count = 0
    for combo in itertools.product(*per_class):
        g = [[0] * n for _ in range(n)]
        for cls, blk in zip(partition.classes, combo):
            for r, vr in enumerate(cls):
                for c, vc in enumerate(cls):
                    g[vr][vc] = blk[r][c]
        yield g
        count += 1
        if count >= cap:
            return


def hyperbolic_search(algebra, entry_bound, budget, seed=0):
    """Hunt for hyperbolic automorphisms with integral unit-constant-term
    characteristic polynomial, over degree-one integer matrices with
    entries in [-entry_bound, entry_bound] and determinant +-1.

    Degree-one maps carry all the spectral content: the graded blocks they
    induce are forced, and the remaining unipotent corrections to an
    automorphism are triangular and leave eigenvalues unchanged.
    Candidates come in a fixed order: signed permutations, block-diagonal
    maps respecting the coherent classes, then a seeded random stream, up
    to `budget` distinct candidates.  Every candidate that extends to the
    algebra and passes all three tests is returned in full; an empty list
    is the expected outcome on the quotients, and the searched box is part
    of the report.
    """
    n = len(algebra.generators)
    rng = random.Random(seed)

    def random_stream():
        while True:
            yield [[rng.randint(-entry_bound, entry_bound) for _ in range(n)] for _ in range(n)]

    streams = [_signed_permutations(n)]
    if algebra.graph is not None:
        streams.append(_block_diagonal_candidates(algebra.graph, entry_bound, budget))
    streams.append(random_stream())

    findings = []
    seen = set()
    tested = 0
    for stream in streams:
        for g in stream:
            if tested >= budget:
                return findings
            key = tuple(tuple(row) for row in g)
            if key in seen:
                continue
            seen.add(key)
            if any(abs(x) > entry_bound for row in g for x in row):
                continue
            tested += 1
            if linalg.det_bareiss(g) not in (1, -1):
                continue
            try:
                blocks = extend_to_algebra(algebra, g)
            except ExtensionError:
                continue
            full = [Fraction(1)]
            for m in sorted(blocks):
                full = _poly_mul_qq(full, _char_poly_qq(blocks[m]))
            if any(c.denominator != 1 for c in full):
                continue
            if abs(full[0]) != 1:
                continue
            p = IntPolynomial([int(c) for c in full])
            cert = unit_root_free(p)
            if cert.free:
                findings.append(SearchFinding(
                    matrix=[list(row) for row in g],
                    char_poly=p.to_json(),
                    certificate=cert.to_json(),
                    degree_blocks={m: [[str(x) for x in row] for row in b]
                                   for m, b in blocks.items()},
                ))
        if tested >= budget:
            break
    return findings
