import random
from fractions import Fraction

import pytest

from scl_lab.free_words import (
    ReducedWord,
    commutator,
    parse_word,
    power,
)
from scl_lab.scl_engine import (
    CertificateError,
    CommutatorCertificate,
    NotInCommutatorSubgroupError,
    SearchBudgetError,
    cl_lower,
    cl_upper,
    default_brooks_dictionary,
    scl_lower_bavard,
    scl_report,
    scl_upper_from_power,
    scl_zero_by_inverse_conjugacy,
)


def w(text, rank=2):
    return parse_word(text, rank)


def random_reduced(rng, rank, length):
    choices = [s * i for i in range(1, rank + 1) for s in (1, -1)]
    letters = []
    last = 0
    for _ in range(length):
        c = rng.choice([x for x in choices if x != -last])
        letters.append(c)
        last = c
    return ReducedWord(rank, letters)


class TestCommutatorCertificate:
    def test_verifies_on_construction(self):
        cert = CommutatorCertificate(w("abAB"), ((w("a"), w("b")),))
        assert cert.genus == 1

    def test_known_two_commutator_expression_for_the_cube(self):
        cube = w("[a,b]^3")
        cert = CommutatorCertificate(
            cube, ((w("abA"), w("BabAA")), (w("Bab"), w("bb"))))
        assert cert.genus == 2

    def test_rejects_wrong_product(self):
        with pytest.raises(CertificateError):
            CommutatorCertificate(w("abAB"), ((w("a"), w("a")),))

    def test_rejects_rank_mismatch(self):
        with pytest.raises(CertificateError):
            CommutatorCertificate(w("abAB"), ((w("a", 3), w("b", 3)),))

    def test_empty_certificate_is_the_identity(self):
        assert CommutatorCertificate(w(""), ()).genus == 0
        with pytest.raises(CertificateError):
            CommutatorCertificate(w("abAB"), ())


class TestClUpper:
    def test_single_commutator(self):
        cert = cl_upper(w("[a,b]"))
        assert cert.genus == 1
        assert cert.pairs == ((w("a"), w("b")),)

    def test_identity(self):
        assert cl_upper(w("")).genus == 0

    def test_not_in_commutator_subgroup(self):
        with pytest.raises(NotInCommutatorSubgroupError):
            cl_upper(w("ab"))

    def test_genus_one_complete_against_brute_force(self):
        # every length <= 4 word that is a commutator with length <= 3
        # entries must be found, and nothing else may be claimed
        from scl_lab.free_words import abelianization, enumerate_reduced_words
        brute = set()
        vocab = list(enumerate_reduced_words(2, 3, min_len=1))
        for u in vocab:
            for v in vocab:
                c = commutator(u, v)
                if 0 < len(c) <= 4:
                    brute.add(c)
        for a in enumerate_reduced_words(2, 4, min_len=1):
            if any(abelianization(a)):
                continue
            hit = cl_upper(a, max_genus=1, max_len=3)
            if a in brute:
                assert hit is not None and hit.genus == 1
            else:
                assert hit is None

    def test_genus_one_misses_genuine_genus_two(self):
        assert cl_upper(w("[a,b]^3"), max_genus=1, max_len=5) is None

    def test_genus_two_recovers_products_of_commutators(self):
        rng = random.Random(101)
        for _ in range(8):
            u1 = random_reduced(rng, 2, rng.randrange(1, 3))
            v1 = random_reduced(rng, 2, rng.randrange(1, 3))
            u2 = random_reduced(rng, 2, rng.randrange(1, 3))
            v2 = random_reduced(rng, 2, rng.randrange(1, 3))
            target = commutator(u1, v1) * commutator(u2, v2)
            cert = cl_upper(target, max_genus=2, max_len=4)
            assert cert is not None
            assert cert.genus <= 2

    def test_deterministic(self):
        a = w("[a,b]^2")
        c1 = cl_upper(a, max_len=4)
        c2 = cl_upper(a, max_len=4)
        assert c1.pairs == c2.pairs

    def test_budget_guard(self):
        with pytest.raises(SearchBudgetError):
            cl_upper(w("[a,b]^3"), max_genus=2, max_len=6, pair_budget=1000)

    def test_genus_cap(self):
        with pytest.raises(ValueError):
            cl_upper(w("abAB"), max_genus=3)

    def test_genus_subadditivity_spot_check(self):
        # the searches are complete for their budget, so a product can
        # never need more genus than its factors together provide
        rng = random.Random(303)
        checked = 0
        for _ in range(10):
            u = commutator(random_reduced(rng, 2, 2), random_reduced(rng, 2, 2))
            v = commutator(random_reduced(rng, 2, 2), random_reduced(rng, 2, 2))
            certs = [cl_upper(x, max_genus=2, max_len=4) for x in (u, v, u * v)]
            if any(c is None for c in certs):
                continue
            assert certs[2].genus <= certs[0].genus + certs[1].genus
            checked += 1
        assert checked >= 5


class TestLowerBounds:
    def test_cl_lower_values(self):
        assert cl_lower(w("")) == 0
        assert cl_lower(w("[a,b]")) == 1
        # homogeneous value 13 at the 13th power forces genus 2
        assert cl_lower(w("[a,b]^13")) == 2

    def test_cl_lower_rejects_nonzero_abelianization(self):
        with pytest.raises(NotInCommutatorSubgroupError):
            cl_lower(w("aab"))

    def test_bavard_documented(self):
        bound, witness = scl_lower_bavard(w("[a,b]"))
        assert bound == Fraction(1, 12)
        assert str(witness) == "ab"

    def test_bavard_scales_with_powers(self):
        bound3, _ = scl_lower_bavard(w("[a,b]^3"))
        assert bound3 == Fraction(3, 12)

    def test_default_dictionary(self):
        d = default_brooks_dictionary(w("[a,b]"))
        texts = [str(u) for u in d]
        assert "ab" in texts and "abAB" in texts and "aa" in texts
        assert all(2 <= len(u) <= 6 for u in d)
        assert len(set(d)) == len(d)
        from scl_lab.free_words import word_sort_key
        keys = [word_sort_key(u) for u in d]
        assert keys == sorted(keys)


class TestSclUpperFromPower:
    def test_formula(self):
        a = w("[a,b]")
        cert = cl_upper(power(a, 2), max_len=4)
        assert cert.genus == 2
        assert scl_upper_from_power(a, 2, cert) == Fraction(3, 4)

    def test_rejects_mismatched_certificate(self):
        a = w("[a,b]")
        cert = cl_upper(a)
        with pytest.raises(CertificateError):
            scl_upper_from_power(a, 2, cert)


class TestSclReport:
    def test_single_commutator_report(self):
        rep = scl_report(w("[a,b]"))
        assert rep.status == "bounded"
        assert rep.lower == Fraction(1, 12)
        assert rep.upper == Fraction(1, 2)
        assert str(rep.lower_witness) == "ab"
        assert rep.power == 1 and rep.power_genus == 1
        assert "above-homological-margulis-constant" in rep.flags

    def test_identity_report(self):
        rep = scl_report(w(""))
        assert rep.status == "bounded"
        assert rep.lower == 0 and rep.upper == 0

    def test_not_in_commutator_subgroup(self):
        rep = scl_report(w("ab"))
        assert rep.status == "not_in_commutator_subgroup"
        assert rep.lower is None and rep.upper is None

    def test_budget_exhausted_is_flagged(self):
        rep = scl_report(w("[a,b]^3"), max_genus=1, max_len=4)
        assert rep.status == "inconclusive"
        assert rep.upper is None
        assert "budget-exhausted" in rep.flags
        assert rep.lower == Fraction(1, 4)

    def test_report_brackets_are_ordered_on_random_commutator_products(self):
        rng = random.Random(202)
        bounded = 0
        for _ in range(50):
            pieces = []
            for _ in range(rng.randrange(1, 3)):
                u = random_reduced(rng, 2, rng.randrange(1, 3))
                v = random_reduced(rng, 2, rng.randrange(1, 3))
                pieces.append(commutator(u, v))
            target = pieces[0]
            for p in pieces[1:]:
                target = target * p
            rep = scl_report(target, n_max=2, max_len=4)
            if target.is_identity():
                assert rep.lower == 0 and rep.upper == 0
                continue
            assert rep.status in ("bounded", "inconclusive")
            if rep.status == "bounded":
                bounded += 1
                assert rep.lower <= rep.upper
                assert rep.upper >= Fraction(1, 2)
        assert bounded >= 25

    def test_conjugation_invariance_of_lower_bound(self):
        from scl_lab.free_words import conjugate
        a = w("[a,b]")
        for c in (w("a"), w("ba"), w("aBA")):
            rep = scl_report(conjugate(a, c))
            assert rep.lower == Fraction(1, 12)
            assert rep.upper == Fraction(1, 2)


class TestInverseConjugacy:
    def test_trivial_element_passes(self):
        cert = scl_zero_by_inverse_conjugacy(w(""), w("ab"), 1)
        assert cert.kind == "free-group"
        assert cert.conclusion == "scl(element) = 0"

    def test_nontrivial_free_element_rejected(self):
        # free groups never conjugate an element to its inverse
        with pytest.raises(CertificateError):
            scl_zero_by_inverse_conjugacy(w("a"), w("b"), 1)
        with pytest.raises(CertificateError):
            scl_zero_by_inverse_conjugacy(w("abAB"), w("ba"), 2)

    def test_power_must_be_positive(self):
        with pytest.raises(CertificateError):
            scl_zero_by_inverse_conjugacy(w(""), w("a"), 0)
