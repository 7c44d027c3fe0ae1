# pylint: disable=invalid-name

"""
Module for the randomized invariant suite of the ``selftest`` command.

Every property draws its instances from its own generator
``default_rng([seed, index])``, so the suite is reproducible and the
properties do not influence each other. A property returns ``None`` on
success and a JSON witness on failure.

A planted bug perturbs one side of the named property; the suite must then
report that property as failing.
"""

from functools import lru_cache

import numpy as np

from dglastacks.coefficients import ArtinRing
from dglastacks.descent import (
    MODELS, DescentDatum, coboundary, datum_from_sheet_cocycle,
    pseudocircle, random_level1, twisted_form_class, circle3
)
from dglastacks.dgla import (
    DglaElement, GaugeTransform, TwoMorphismElt, bch_product,
    check_conjugation, endomorphisms, gauge_act, horizontal_compose,
    is_maurer_cartan, matrix_representation, nilpotent_exp, nilpotent_log,
    random_dgla, random_element, random_mc, twisted_bracket,
    two_morphism_act, upper_triangular, vertical_compose
)
from dglastacks.gdgla import (
    CosimplicialG, cech_hochschild_total, classify_first_order,
    filtration_mask, homotopy_identity_defect, rank_oracle
)
from dglastacks.hochschild import (
    HochschildDgla, STANDARD_ALGEBRAS, StarProduct, dual_numbers,
    hochschild_diff, mu_from_star, normalize_project, random_cochain,
    star_from_mc
)
from dglastacks.matrixalgebras import BlockAlgebra, cotrace, local_diff
from dglastacks.simplicial import CosimplicialVS, HatCochain, \
    homotopy_defect, simplices
from dglastacks.stacks import (
    DeformationDatum, random_stack, star_to_gstack, strictify,
    validate_gstack, validate_one_morphism
)


def _plant(x):
    """Add ``t^(N-1)`` times the first basis vector."""
    if x.parent.dimension(x.degree) == 0:
        return x
    bump = DglaElement.basis(x.parent, x.degree, 0, x.ring)
    return x + bump.shift(x.ring.N - 1)


def _first_difference(lhs, rhs):
    for r, (a, b) in enumerate(zip(lhs.layers, rhs.layers)):
        for i, (u, v) in enumerate(zip(a, b)):
            if u != v:
                return {"order": r, "coordinate": i}
    return None


def _random_setting(rng):
    g = random_dgla(rng)
    ring = ArtinRing(int(rng.integers(2, 5)))
    return g, ring


# Properties
# ==========

def bch_associativity(rng, bug):
    """``bch(bch(X, Y), Z) = bch(X, bch(Y, Z))`` in ``exp g^0``."""
    g, ring = _random_setting(rng)
    X, Y, Z = (random_element(g, 0, ring, rng, bound=1) for _ in range(3))
    lhs = bch_product(bch_product(X, Y), Z)
    rhs = bch_product(X, bch_product(Y, Z))
    if bug:
        rhs = _plant(rhs)
    witness = _first_difference(lhs, rhs)
    return witness and dict(witness, dgla=g.name, N=ring.N)


def bch_matrix_product(rng, bug):
    """``exp bch(X, Y) = exp X exp Y`` in a faithful representation."""
    g = upper_triangular(int(rng.integers(2, 4)))
    ring = ArtinRing(int(rng.integers(2, 5)))
    X, Y = (random_element(g, 0, ring, rng, bound=2) for _ in range(2))
    Z = bch_product(X, Y)
    if bug:
        Z = _plant(Z)
    lhs = matrix_representation(Z)
    rhs = nilpotent_log(nilpotent_exp(matrix_representation(X)).dot(
        nilpotent_exp(matrix_representation(Y))))
    if any(a != b for a, b in zip(lhs.flat, rhs.flat)):
        return {"dgla": g.name, "N": ring.N}
    return None


def gauge_group_action(rng, bug):
    """``exp bch(X, Y) . gamma = exp X . (exp Y . gamma)``."""
    g, ring = _random_setting(rng)
    gamma = random_mc(g, ring, rng, bound=1)
    X, Y = (random_element(g, 0, ring, rng, bound=1) for _ in range(2))
    lhs = gauge_act(bch_product(X, Y), gamma)
    rhs = gauge_act(X, gauge_act(Y, gamma))
    if bug:
        rhs = _plant(rhs)
    witness = _first_difference(lhs, rhs)
    return witness and dict(witness, dgla=g.name, N=ring.N)


def gauge_preserves_mc(rng, bug):
    """The gauge action maps MC elements to MC elements."""
    g, ring = _random_setting(rng)
    gamma = random_mc(g, ring, rng, bound=1)
    X = random_element(g, 0, ring, rng, bound=1)
    image = gauge_act(X, gamma)
    if bug:
        image = _plant(image)
    if not is_maurer_cartan(image):
        return {"dgla": g.name, "N": ring.N}
    return None


def conjugation(rng, bug):
    """``d + ad(exp X . gamma) = e^{ad X} (d + ad gamma) e^{-ad X}``."""
    g, ring = _random_setting(rng)
    gamma = random_mc(g, ring, rng, bound=1)
    X = random_element(g, 0, ring, rng, bound=1)
    target = gauge_act(X, gamma)
    if bug:
        target = _plant(target)
    if not check_conjugation(X, gamma, target):
        return {"dgla": g.name, "N": ring.N}
    return None


def star_mc_dictionary(rng, bug):
    """Star products and MC elements of the Hochschild DGLA correspond."""
    names = sorted(STANDARD_ALGEBRAS)
    name = names[int(rng.integers(len(names)))]
    A = STANDARD_ALGEBRAS[name]()
    ring = ArtinRing(int(rng.integers(2, 4)))
    g = HochschildDgla(A, 3)
    gamma = random_mc(g, ring, rng, bound=1)
    if bug:
        gamma = _plant(gamma)
    if not is_maurer_cartan(gamma):
        return {"algebra": name, "N": ring.N, "reason": "not MC"}
    star = star_from_mc(gamma)
    if not star.is_associative() or mu_from_star(star, g) != gamma:
        return {"algebra": name, "N": ring.N}
    return None


def subdivision_homotopy(rng, bug):
    """``iota pi - Id = s (d h + h d)`` at every simplex of a truncation."""
    V = CosimplicialVS.random(rng, 3)
    n = int(rng.integers(0, 4))
    f = HatCochain.random(V, n, int(rng.integers(1000)))
    for lam in simplices(n, 3 if n <= 2 else 2):
        defect = homotopy_defect(f, lam)
        if bug:
            defect = defect + 1
        if any(defect):
            return {"degree": n, "simplex": lam.to_json()}
    return None


@lru_cache(maxsize=None)
def _trivial_G(model):
    d = DescentDatum.trivial(MODELS[model](), ArtinRing(2))
    return CosimplicialG(d, n_cap=3, d_cap=1, arity_cap=2)


ACYCLIC_MODELS = ["discrete", "pseudocircle", "circle3"]


def gdgla_homotopy(rng, bug):
    """``h d + d h = Id`` on ``Gr^s`` coordinates of vectors in ``F^s``."""
    model = ACYCLIC_MODELS[int(rng.integers(len(ACYCLIC_MODELS)))]
    G = _trivial_G(model)
    n, arity = int(rng.integers(1, 3)), int(rng.integers(0, 3))
    s = int(rng.integers(0, arity + 1))
    dim = G.level(n).offsets(arity)[-1]
    v = np.array([int(c) for c in rng.integers(-2, 3, dim)], dtype=object)
    v = np.where(filtration_mask(G, n, arity, s), v, 0)
    defects = homotopy_identity_defect(G, n, arity, v, s)
    if bug:
        defects = defects + [("planted",)]
    if defects:
        return {"model": model, "level": n, "arity": arity, "s": s,
                "count": len(defects)}
    return None


def acyclicity_rank(rng, bug):
    """``H^1 = H^2 = 0`` on the truncation, for every arity up to two."""
    model = ACYCLIC_MODELS[int(rng.integers(2))]
    G = _trivial_G(model)
    for arity in range(3):
        dims = rank_oracle(G, arity, 2)
        if bug:
            dims[1] += 1
        if dims[1:] != [0, 0]:
            return {"model": model, "arity": arity, "dimensions": dims}
    return None


@lru_cache(maxsize=None)
def _circle_G(deformed):
    fiber = dual_numbers() if deformed else None
    d = DescentDatum.trivial(pseudocircle(), ArtinRing(3), fiber)
    return CosimplicialG(d, n_cap=3, d_cap=1, arity_cap=3)


def _deformed_base(G, c):
    """Strict stack of ``x * x = c t`` on the dual numbers."""
    B = [[["0", "0"], ["0", "0"]], [["0", "0"], [str(c), "0"]]]
    star = StarProduct.from_json(dual_numbers(), ArtinRing(3), [B])
    return star_to_gstack(DeformationDatum.from_star(G, star))


def strictification(rng, bug):
    """Strictified random stacks on the pseudocircle are valid and strict."""
    deformed = bool(rng.integers(2))
    G = _circle_G(deformed)
    base = _deformed_base(G, int(rng.integers(1, 3))) if deformed else None
    stack, _ = random_stack(G, ArtinRing(3), rng, base=base)
    strict, morphism, trace = strictify(stack)
    if bug:
        strict.g2 = _plant(strict.g2)
    violations = validate_gstack(strict) + validate_one_morphism(morphism)
    if violations or not strict.is_strict():
        return {"violations": [v.to_json() for v in violations],
                "deformed": deformed, "rounds": len(trace)}
    return None


def twisted_form_coboundary(rng, bug):
    """Coboundary data have trivial class with a trivialization."""
    cover = [pseudocircle, circle3][int(rng.integers(2))]()
    ring = ArtinRing(int(rng.integers(1, 4)))
    phi = random_level1(cover, ring, rng)
    values = coboundary(cover, ring, phi)
    result = twisted_form_class(datum_from_sheet_cocycle(cover, ring, values))
    expected = dict(values)
    if bug:
        first = cover.level_sheets(2)[0]
        expected[first] = expected[first] * 2
    if not result.trivial or coboundary(
            cover, ring, result.trivialization) != expected:
        return {"cover": cover.name, "N": ring.N}
    return None


def cotrace_chain_map(rng, bug):
    """``[m, cotr D] = cotr(delta D)`` for a twisted block algebra."""
    cover = pseudocircle()
    ring = ArtinRing(1)
    fiber = dual_numbers()
    values = coboundary(cover, ring, random_level1(cover, ring, rng))
    d = datum_from_sheet_cocycle(cover, ring, values, fiber)
    base = BlockAlgebra(d, [0, 1], cover.representative((0, 1), 0))
    arity = int(rng.integers(0, 3))
    D = normalize_project(random_cochain(fiber, arity, rng))
    lhs = local_diff(cotrace(D, base))
    image = hochschild_diff(D)
    if bug:
        image = image.scale(2)
    rhs = cotrace(image, base)
    if lhs != rhs:
        return {"arity": arity}
    return None


def first_order_classes(rng, bug):
    """Kernel ``H^1`` agrees with the total complex oracle."""
    model = ["point", "pseudocircle"][int(rng.integers(2))]
    d = DescentDatum.trivial(MODELS[model](), ArtinRing(2), dual_numbers())
    dimension = classify_first_order(d, arity_cap=3)["dimension"]
    oracle = cech_hochschild_total(d, 2)
    if bug:
        dimension += 1
    if dimension != oracle:
        return {"model": model, "classify": dimension, "oracle": oracle}
    return None


def _twisted_setting(rng):
    g = [endomorphisms(2, 2), endomorphisms(2, 1),
         endomorphisms(1, 2)][int(rng.integers(3))]
    ring = ArtinRing(int(rng.integers(2, 5)))
    gamma = random_mc(g, ring, rng, bound=1)
    return g, ring, gamma


def twisted_bracket_lie(rng, bug):
    """``[a, d_gamma b]`` is antisymmetric and satisfies Jacobi."""
    g, ring, gamma = _twisted_setting(rng)
    a, b, c = (random_element(g, -1, ring, rng) for _ in range(3))

    def br(x, y):
        return twisted_bracket(gamma, x, y)

    jacobi = br(a, br(b, c)) + br(b, br(c, a)) + br(c, br(a, b))
    if bug:
        jacobi = _plant(jacobi)
    if not jacobi.is_zero():
        return {"dgla": g.name, "N": ring.N, "identity": "jacobi"}
    witness = _first_difference(br(a, b), -br(b, a))
    return witness and dict(witness, dgla=g.name, N=ring.N,
                            identity="antisymmetry")


def interchange_law(rng, bug):
    """Horizontal and vertical composition of 2-morphisms interchange."""
    g, ring, gamma2 = _twisted_setting(rng)
    X = random_element(g, 0, ring, rng, bound=1)
    gamma3 = gauge_act(X, gamma2)
    s12, t12 = (TwoMorphismElt(gamma2, random_element(g, -1, ring, rng))
                for _ in range(2))
    s23, t23 = (TwoMorphismElt(gamma3, random_element(g, -1, ring, rng))
                for _ in range(2))
    X2 = two_morphism_act(s23, GaugeTransform(X, gamma2)).log_part
    lhs = horizontal_compose(
        vertical_compose(t23, s23), vertical_compose(t12, s12), X
    ).log_part
    rhs = vertical_compose(
        horizontal_compose(t23, t12, X2), horizontal_compose(s23, s12, X)
    ).log_part
    if bug:
        rhs = _plant(rhs)
    witness = _first_difference(lhs, rhs)
    return witness and dict(witness, dgla=g.name, N=ring.N)


PROPERTIES = {
    "bch_associativity": (bch_associativity, 20),
    "bch_matrix_product": (bch_matrix_product, 20),
    "gauge_group_action": (gauge_group_action, 20),
    "gauge_preserves_mc": (gauge_preserves_mc, 20),
    "conjugation": (conjugation, 10),
    "star_mc_dictionary": (star_mc_dictionary, 10),
    "subdivision_homotopy": (subdivision_homotopy, 20),
    "gdgla_homotopy": (gdgla_homotopy, 12),
    "acyclicity_rank": (acyclicity_rank, 2),
    "strictification": (strictification, 50),
    "twisted_form_coboundary": (twisted_form_coboundary, 10),
    "cotrace_chain_map": (cotrace_chain_map, 10),
    "first_order_classes": (first_order_classes, 2),
    "twisted_bracket_lie": (twisted_bracket_lie, 20),
    "interchange_law": (interchange_law, 20),
}
"""Name to ``(property, default instance count)``."""


def run_selftest(seed=0, count=None, plant_bug=None, properties=None,
                 log=print):
    """
    Run the suite; returns the rows of every property.

    Each row holds the property name, the instance count, the passed
    count and the first counterexample (instance index and witness).
    """
    if plant_bug is not None and plant_bug not in PROPERTIES:
        raise KeyError(f"Unknown property {plant_bug}")
    names = list(properties or PROPERTIES)
    rows = []
    for index, name in enumerate(PROPERTIES):
        if name not in names:
            continue
        check, default = PROPERTIES[name]
        rng = np.random.default_rng([seed, index])
        instances = count or default
        passed, counterexample = 0, None
        for instance in range(instances):
            witness = check(rng, plant_bug == name)
            if witness is None:
                passed += 1
            elif counterexample is None:
                counterexample = {"instance": instance, "witness": witness}
        log(f"-> {name}: {passed}/{instances}")
        rows.append({
            "property": name,
            "instances": instances,
            "passed": passed,
            "counterexample": counterexample,
        })
    return rows
