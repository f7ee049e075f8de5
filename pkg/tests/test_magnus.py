import numpy as np
import pytest

from kgc.errors import WordTooShort
from kgc.magnus import (ImplicitGroup, LyndonWord, TruncatedSeries, commutator_word,
                        common_commutator_search, counterexample_harness, free_nilpotent_standin,
                        inverse_word, is_lyndon, lyndon_words, magnus_image, necklace_count,
                        power_word, random_word, reduce_word, tau, zassenhaus_membership)
from kgc.unitriangular import build_unitriangular

# k = 2, lengths 1..5
LYNDON_COUNTS = [2, 1, 2, 3, 6]

COMMUTATOR_12 = (-1, -2, 1, 2)


@pytest.mark.parametrize("n, count", enumerate(LYNDON_COUNTS, start=1))
def test_lyndon_counts(n, count):
    words = lyndon_words(2, n)
    assert len(words) == count
    assert necklace_count(2, n) == count
    assert words == sorted(words)


def test_lyndon_words():
    assert [w.letters for w in lyndon_words(2, 3)] == [(1, 1, 2), (1, 2, 2)]
    assert len(lyndon_words(3, 4)) == necklace_count(3, 4) == 18
    assert is_lyndon((1, 2, 2))
    assert not is_lyndon((2, 1))
    assert not is_lyndon((1, 2, 1, 2))
    assert not is_lyndon(())
    with pytest.raises(ValueError, match="not a Lyndon word"):
        LyndonWord((2, 1))
    with pytest.raises(ValueError, match="positive"):
        necklace_count(2, 0)


def test_free_words():
    assert reduce_word((1, 2, -2, -1, 3)) == (3,)
    assert inverse_word((1, -2)) == (2, -1)
    assert commutator_word((1,), (2,)) == COMMUTATOR_12
    assert power_word((1, 2), -2) == (-2, -1, -2, -1)
    with pytest.raises(ValueError, match="Letter 0"):
        reduce_word((1, 0))
    word = random_word(3, 20, np.random.default_rng(5))
    assert isinstance(word, tuple)
    assert word == reduce_word(word)


def test_tau():
    assert tau((1, 2)) == COMMUTATOR_12
    assert tau((1, 1, 2)) == commutator_word((1,), COMMUTATOR_12)
    with pytest.raises(WordTooShort):
        tau((1,))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_tau_valuation(n):
    for w in lyndon_words(2, n):
        image = magnus_image(tau(w.letters), 2, 2, n)
        assert image.valuation() == n
        assert image.component(n).any()


def test_truncated_series():
    x = TruncatedSeries.generator(1, 2, 3, 3)
    assert (x * x.inverse()).is_one()
    assert x.terms() == {"1": 1, "X1": 1}
    assert TruncatedSeries.one(2, 3, 3).valuation() == 4
    with pytest.raises(ValueError, match="outside the alphabet"):
        TruncatedSeries.generator(3, 2, 3, 3)
    with pytest.raises(ValueError, match="different truncated algebras"):
        x * TruncatedSeries.one(2, 3, 2)
    with pytest.raises(ValueError, match="not invertible"):
        (x - TruncatedSeries.one(2, 3, 3)).inverse()


def test_magnus_image():
    rng = np.random.default_rng(11)
    for _ in range(10):
        a, b = random_word(2, 8, rng), random_word(2, 8, rng)
        assert magnus_image(a + b, 2, 2, 4) == magnus_image(a, 2, 2, 4) * magnus_image(b, 2, 2, 4)
    assert magnus_image((1, -1), 2, 5, 3).is_one()
    assert magnus_image(COMMUTATOR_12, 2, 2, 2).terms() == {"1": 1, "X1X2": 1, "X2X1": 1}
    with pytest.raises(ValueError, match="beyond the alphabet"):
        magnus_image((3,), 2, 2, 2)


def test_zassenhaus_membership():
    assert zassenhaus_membership(COMMUTATOR_12, 2, 1).member
    verdict = zassenhaus_membership(COMMUTATOR_12, 2, 2)
    assert not verdict.member
    assert not verdict.matrix
    assert verdict.exhaustive
    assert zassenhaus_membership((1, 1), 2, 1)
    assert not zassenhaus_membership((1, 1), 2, 2)
    assert zassenhaus_membership((1, 1, 1), 3, 2)
    jd = zassenhaus_membership(tau((1, 1, 2)), 2, 2).to_json_dict()
    assert jd["member"]
    assert jd["level"] == 3
    assert jd["matrix_mode"] == "exhaustive"


@pytest.mark.slow
@pytest.mark.parametrize("n", [2, 3, 4])
def test_membership_criteria_agree_on_random_words(n):
    # at k = 2 every U_n(Z/2) tuple is tried, so a disagreement raises
    rng = np.random.default_rng(40 + n)
    for i in range(1000):
        u, v = random_word(2, 8, rng), random_word(2, 8, rng)
        word = u if i % 3 == 0 else commutator_word(u, v) if i % 3 == 1 else power_word(u, 2)
        verdict = zassenhaus_membership(word, 2, n, 2)
        assert verdict.exhaustive
        assert verdict.member == verdict.matrix
        assert magnus_image(u + v, 2, 2, n) == magnus_image(u, 2, 2, n) * magnus_image(v, 2, 2, n)


def test_standins():
    G = free_nilpotent_standin(2, 2, "zassenhaus", 2)
    assert G.order == 32
    assert free_nilpotent_standin(2, 2, "zassenhaus", 1).order == 4
    with pytest.raises(ValueError, match="Unknown filtration kind"):
        free_nilpotent_standin(2, 2, "derived", 2)
    with pytest.raises(ValueError, match="not a prime"):
        free_nilpotent_standin(2, 4, "zassenhaus", 2)


def test_implicit_group():
    Q = ImplicitGroup(2, 2, 3)
    Q.verify()
    assert len(Q.relators()) == 5
    assert Q.evaluate(power_word((1,), 4)).is_one()
    assert not Q.evaluate(power_word((1,), 2)).is_one()
    assert Q.to_json_dict()["implicit"]


def test_common_commutator_search():
    search = common_commutator_search(build_unitriangular(2, 2), 4)
    assert search["partitions"] == 24
    assert search["skipped"] == 40
    assert search["violations"] == 0


def test_counterexample_harness():
    report = counterexample_harness(2, 2, 9)
    assert report.passed
    jd = report.to_json_dict()
    assert jd["verdict"] == "transfer fails"
    assert jd["items"]["independence"]["rank"] == 36
    assert jd["items"]["non_membership"]["span_rank"] == 35
    assert jd["items"]["non_membership"]["rank_with_tau12"] == 36
    assert jd["items"]["non_membership"]["conjugates_agreeing"] == 100
    assert jd["items"]["common_commutator"]["violations"] == 0
    assert jd["items"]["kernel_generating_condition_via_transfer"] == {
        "holds": False, "derived_from": "transfer condition (a)"}
    assert "kernel_generating_condition" not in jd["items"]


def test_counterexample_harness_below_bound():
    report = counterexample_harness(2, 2, 4)
    assert report.passed is None
    assert report.verdict == "hypothesis fails"
    with pytest.raises(ValueError, match="n = 2"):
        counterexample_harness(2, 3, 9)
