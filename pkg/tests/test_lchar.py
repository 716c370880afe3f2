import pytest

from eiscoh.errors import NonCriticalAtomError
from eiscoh.kostant import InfinityType
from eiscoh.lchar import (
    ABS_DISC_SQRT,
    HARDER_PERIOD,
    NABLA,
    Affine,
    FormalLRatio,
    GL1Character,
    HeckeCharSymbol,
    LSymbol,
    PeriodMonomial,
    TorusCharacter,
    constant_term_coefficients,
    constant_term_expansion,
    coroot_pairing,
    critical_offsets,
    gk_product,
    harder_block,
    l_ratio,
    lambda_k,
    sigma_character,
    sigma_on_ratio,
)
from eiscoh.rationality import ScenarioConfig
from eiscoh.weyl import Root


def chi_for(n: int) -> HeckeCharSymbol:
    return HeckeCharSymbol("eta", InfinityType.from_values((0, n)))


def test_lambda_k_exponents():
    lam = lambda_k(chi_for(3), 1, 3)
    assert lam.hecke_power == (-1, 0, 0)
    assert lam.abs_power == (Affine(2, -1), Affine(-1), Affine(-1))

    top = lambda_k(chi_for(3), 3, 3)
    assert top.hecke_power == (0, 0, -1)
    assert top.abs_power == (Affine(0), Affine(0), Affine(0, -1))


def test_lambda_k_range():
    with pytest.raises(ValueError):
        lambda_k(chi_for(3), 4, 3)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_coroot_pairing_against_last_coordinate(n):
    lam = lambda_k(chi_for(n), n, n)
    for i in range(1, n):
        assert coroot_pairing(lam, Root(i, n)) == GL1Character(1, Affine(i - n, 1))


def test_trivial_character_pairs_trivially():
    lam = TorusCharacter.trivial(4)
    assert all(coroot_pairing(lam, Root(i, j)).is_trivial for i in range(1, 4) for j in range(i + 1, 5))


@pytest.mark.parametrize("n", range(2, 11))
def test_gk_product_telescopes(n):
    chi = chi_for(n)
    for k in range(1, n):
        assert gk_product(k, n, chi) == l_ratio(Affine(k - n, 1), Affine(0, 1), chi)
    assert gk_product(n, n, chi).is_one()


def test_constant_term_coefficients_n3():
    chi = chi_for(3)
    coefficients = constant_term_coefficients(3, chi)
    assert coefficients[-1].is_one()
    first = coefficients[0]
    assert first.scalar == PeriodMonomial.atom(ABS_DISC_SQRT, -2)
    assert str(first.l_ratio_part()) == "L(s-2, eta)/(L(s, eta))"

    at_zero = constant_term_coefficients(3, chi, s_at_zero=True)
    assert at_zero[0].l_ratio_part() == l_ratio(Affine(-2), Affine(0), chi)


def test_constant_term_expansion_lists_every_coset():
    expansion = constant_term_expansion(3, chi_for(3))
    assert [term["k"] for term in expansion] == [1, 2, 3]
    assert [term["w_k"] for term in expansion] == [[2, 3, 1], [1, 3, 2], [1, 2, 3]]


def test_critical_offsets():
    assert critical_offsets(3) == [0, -1, -2, -3]


def test_harder_block():
    chi = chi_for(3)
    block = harder_block(chi, 1, 3)
    assert block.scalar == PeriodMonomial.atom(HARDER_PERIOD, 2)
    assert block.l_ratio_part() == l_ratio(Affine(-2), Affine(0), chi)
    assert harder_block(chi, 3, 3).is_one()


def test_period_monomial_algebra():
    assert PeriodMonomial(1, {"i": 2}) == PeriodMonomial(-1)
    p = PeriodMonomial.atom(HARDER_PERIOD, 2) * PeriodMonomial.atom(HARDER_PERIOD, -2)
    assert p.is_one()
    substituted = PeriodMonomial.atom(ABS_DISC_SQRT, -1).substitute(
        ABS_DISC_SQRT, PeriodMonomial(-1, {HARDER_PERIOD: 1, NABLA: 1})
    )
    assert substituted == PeriodMonomial(-1, {HARDER_PERIOD: -1, NABLA: -1})
    with pytest.raises(ValueError, match="unknown period atom"):
        PeriodMonomial(1, {"Omega": 1})


def test_formal_ratio_cancels():
    chi = chi_for(2)
    r = l_ratio(Affine(-1), Affine(0), chi)
    assert (r / r).is_one()


def test_sigma_on_ratio_conjugation(gauss, gauss_chi):
    conj = gauss.conjugation()
    r = l_ratio(Affine(-1), Affine(0), gauss_chi) * PeriodMonomial.atom(HARDER_PERIOD, 1)
    twisted = sigma_on_ratio(r, conj, 3)
    twisted_chi = sigma_character(gauss_chi, conj)
    assert twisted == l_ratio(Affine(-1), Affine(0), twisted_chi) * PeriodMonomial.atom(HARDER_PERIOD, 1)
    assert twisted_chi.infinity_type.values() == [3, 0]
    assert sigma_on_ratio(r, gauss.identity(), 3) == r


def test_sigma_twice_composes(gauss, gauss_chi):
    conj = gauss.conjugation()
    back = sigma_character(sigma_character(gauss_chi, conj), conj)
    assert back.infinity_type == gauss_chi.infinity_type


@pytest.mark.parametrize(
    "build",
    [
        # point outside the critical range
        lambda chi: FormalLRatio([LSymbol(Affine(1), chi)], [LSymbol(Affine(0), chi)], PeriodMonomial.atom(HARDER_PERIOD, -1)),
        # period atom without a rewrite rule
        lambda chi: l_ratio(Affine(-1), Affine(0), chi) * PeriodMonomial(1, {HARDER_PERIOD: 1, NABLA: 1}),
        # wrong period power
        lambda chi: l_ratio(Affine(-1), Affine(0), chi) * PeriodMonomial.atom(HARDER_PERIOD, 2),
        # unpaired L-value
        lambda chi: FormalLRatio([LSymbol(Affine(-1), chi)], [], PeriodMonomial.atom(HARDER_PERIOD, 1)),
        # s still free
        lambda chi: FormalLRatio([LSymbol(Affine(-1, 1), chi)], [LSymbol(Affine(0), chi)], PeriodMonomial.atom(HARDER_PERIOD, 1)),
        # below the critical strip for n = 3
        lambda chi: l_ratio(Affine(-4), Affine(0), chi) * PeriodMonomial.atom(HARDER_PERIOD, 4),
    ],
)
def test_sigma_on_ratio_refuses_non_critical(gauss, gauss_chi, build):
    with pytest.raises(NonCriticalAtomError, match="non-critical atom"):
        sigma_on_ratio(build(gauss_chi), gauss.conjugation(), 3)


def test_sigma_on_ratio_composes(zeta5):
    chi = ScenarioConfig("compose", "zeta5", 2, (0, 2, 3, -1), tower=zeta5).character()
    block = harder_block(chi, 1, 2)
    elements = zeta5.sigma_set()
    for s in elements:
        for t in elements:
            nested = sigma_on_ratio(sigma_on_ratio(block, t, 2), s, 2)
            assert nested == sigma_on_ratio(block, s * t, 2), (s, t)
