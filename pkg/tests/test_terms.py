"""
Tests de l'algèbre de termes, de R1, des substitutions et du filtrage ACh.
"""

import pytest
from hypothesis import given, settings, strategies as st

from src.core.exceptions import MalformedTermError, SignatureError, SubstitutionInvariantError
from src.terms.matching import is_more_general, iter_matches
from src.terms.rewriting import ac_equal, ach_equal, h_height, normalize_r1
from src.terms.substitution import Substitution, apply, canonical_renaming, compose
from src.terms.term import (
    Signature,
    Symbol,
    SymbolKind,
    Term,
    app,
    canonicalize,
    const,
    h,
    plus,
    raw_plus,
    var,
)
from tests.conftest import t, term_strategy

x, y, z = var("x"), var("y"), var("z")
a, b, c = const("a"), const("b"), const("c")


def _raw(term: Term) -> Term:
    """Déconstruit les sommes canoniques en arbres binaires non triés."""
    if not term.args:
        return term
    args = [_raw(arg) for arg in term.args]
    if term.is_sum:
        node = args[-1]
        for arg in reversed(args[:-1]):
            node = raw_plus(node, arg)
        return node
    return Term(term.head, tuple(args))


# ============================================
# FORME CANONIQUE
# ============================================

class TestCanonicalize:

    def test_associativity_is_flattened(self):
        assert canonicalize(raw_plus(raw_plus(a, b), c)) == plus(a, b, c)
        assert canonicalize(raw_plus(raw_plus(a, b), c)).args == (a, b, c)

    def test_commutativity_is_sorted(self):
        assert canonicalize(raw_plus(b, a)).args == (a, b)

    def test_variables_sort_before_constants(self):
        assert plus(a, x).args == (x, a)

    def test_wrong_arity_is_rejected(self):
        with pytest.raises(MalformedTermError):
            canonicalize(Term(Symbol("h", SymbolKind.H, 1), (a, b)))
        with pytest.raises(MalformedTermError):
            app("f")

    @given(term_strategy())
    def test_idempotent(self, term):
        once = canonicalize(_raw(term))
        assert canonicalize(once) == once
        assert once == term


class TestSignature:

    def test_inconsistent_arity(self):
        with pytest.raises(SignatureError):
            Signature.of([app("f", x), app("f", x, y)])

    def test_free_symbols(self):
        signature = Signature.of([app("f", x, h(app("g", a)))])
        assert signature.free_symbols == {"f": 2, "g": 1}
        assert "a" in signature


# ============================================
# ÉGALITÉS AC ET ACh
# ============================================

class TestEquality:

    def test_ac_equal(self):
        assert ac_equal(plus(x, y), plus(y, x))
        assert not ac_equal(plus(x, x, y), plus(x, y))
        assert not ac_equal(plus(h(x), h(y)), h(plus(x, y)))

    def test_normalize_r1(self):
        assert normalize_r1(h(plus(x, y))) == plus(h(x), h(y))
        assert normalize_r1(h(h(a))) == h(h(a))
        assert normalize_r1(h(plus(a, b, c))) == plus(h(a), h(b), h(c))
        assert normalize_r1(h(h(plus(a, b)))) == plus(h(h(a)), h(h(b)))

    def test_ach_equal(self):
        assert ach_equal(h(plus(x, y)), plus(h(x), h(y)))
        assert not ach_equal(app("f", a), app("g", a))
        assert ach_equal(h(h(plus(a, b))), plus(h(h(a)), h(h(b))))

    def test_normalize_under_free_symbol(self):
        assert normalize_r1(app("f", h(plus(x, a)))) == app("f", plus(h(x), h(a)))

    def test_h_height(self):
        assert h_height(h(h(x))) == 2
        assert h_height(x) == 0
        assert h_height(plus(h(a), h(h(b)))) == 2

    @given(term_strategy())
    def test_h_height_is_invariant_under_r1(self, term):
        assert h_height(normalize_r1(term)) == h_height(term)

    @given(term_strategy())
    def test_normal_form_is_stable(self, term):
        normal = normalize_r1(term)
        assert normalize_r1(normal) == normal


# ============================================
# SUBSTITUTIONS
# ============================================

class TestSubstitution:

    def test_apply(self):
        assert apply(Substitution({"x": a}), plus(x, y)) == plus(a, y)
        assert apply(Substitution(), h(x)) == h(x)
        assert apply(Substitution({"x": y}), plus(h(x), y)) == plus(h(y), y)

    def test_apply_recanonicalizes_sums(self):
        sigma = Substitution({"x": plus(b, y)})
        assert sigma.apply(plus(x, a)) == plus(a, b, y)

    def test_compose(self):
        sigma = compose(Substitution({"y": x}), "x", a)
        assert sigma.bindings == {"y": a, "x": a}
        assert compose(Substitution(), "x", h(z)).bindings == {"x": h(z)}

    def test_compose_rejects_bound_variable(self):
        with pytest.raises(SubstitutionInvariantError):
            Substitution({"x": a}).compose("x", b)

    def test_compose_rejects_cycle(self):
        with pytest.raises(SubstitutionInvariantError):
            Substitution({"y": h(x)}).compose("x", y)

    @given(
        st.dictionaries(st.sampled_from(["y", "z"]), term_strategy(("u", "w"), max_leaves=3), max_size=2),
        term_strategy(("y", "z", "w"), max_leaves=3),
        term_strategy(max_leaves=4),
    )
    def test_compose_is_sequential_application(self, bindings, image, term):
        sigma = Substitution(bindings)
        composed = sigma.compose("x", image)
        single = Substitution({"x": sigma.apply(image)})
        assert composed.apply(term) == single.apply(sigma.apply(term))

    def test_printing(self):
        sigma = Substitution({"y": plus(h(x), a), "x": app("f", a, b)})
        assert str(sigma) == "{x ↦ f(a, b), y ↦ a + h(x)}"
        assert sigma.as_strings() == {"x": "f(a, b)", "y": "a + h(x)"}

    def test_canonical_renaming_ignores_fresh_names(self):
        first = Substitution({"x": plus(var("_v7"), var("_v3")), "y": var("_v3")})
        second = Substitution({"x": plus(var("_v1"), var("_v9")), "y": var("_v9")})
        def fresh(name):
            return name.startswith("_v")

        assert canonical_renaming(first, fresh, "_v") == canonical_renaming(second, fresh, "_v")

    def test_canonical_renaming_without_exhaustive_search(self, monkeypatch):
        monkeypatch.setattr("src.terms.substitution.MAX_RENAMING_PERMUTATIONS", 1)
        v = {i: var(f"_v{i}") for i in range(1, 9)}

        def pairs(a, b, c, d):
            return Substitution({
                "x": plus(a, b, c, d),
                "y": plus(app("g", plus(a, b)), app("g", plus(c, d))),
            })

        def fresh(name):
            return name.startswith("_v")

        first = canonical_renaming(pairs(v[1], v[2], v[3], v[4]), fresh, "_v")
        second = canonical_renaming(pairs(v[5], v[7], v[6], v[8]), fresh, "_v")
        third = canonical_renaming(pairs(v[8], v[6], v[5], v[7]), fresh, "_v")
        assert first == second == third
        assert first == pairs(v[1], v[2], v[3], v[4])

    def test_canonical_renaming_keeps_problem_variables(self):
        sigma = Substitution({"x": plus(var("_v5"), y)})
        renamed = canonical_renaming(sigma, lambda name: name.startswith("_v"), "_v")
        assert renamed.bindings == {"x": plus(var("_v1"), y)}


# ============================================
# FILTRAGE ACh
# ============================================

class TestMatching:

    def test_ac_match(self):
        general = Substitution({"x": plus(var("v1"), var("v2"))})
        assert is_more_general(general, Substitution({"x": plus(a, b)}), ["x"])

    def test_head_mismatch(self):
        assert not is_more_general(Substitution({"x": h(var("v"))}), Substitution({"x": a}), ["x"])

    def test_match_through_homomorphism(self):
        general = Substitution({"x": h(var("v"))})
        assert is_more_general(general, Substitution({"x": plus(h(a), h(b))}), ["x"])

    def test_shared_variable_must_agree(self):
        general = Substitution({"x": var("v"), "y": var("v")})
        assert is_more_general(general, Substitution({"x": a, "y": a}), ["x", "y"])
        assert not is_more_general(general, Substitution({"x": a, "y": b}), ["x", "y"])

    def test_target_variables_are_rigid(self):
        assert not is_more_general(Substitution({"x": y}), Substitution(), ["x", "y"])
        assert is_more_general(Substitution(), Substitution({"x": y}), ["z"])

    def test_iter_matches_enumerates_splits(self):
        matches = list(iter_matches([(plus(var("p"), var("q")), plus(a, b))], ["p", "q"]))
        assert {(m["p"], m["q"]) for m in matches} == {(a, b), (b, a)}

    @settings(max_examples=50)
    @given(term_strategy(max_leaves=4), term_strategy(("u", "w"), max_leaves=3))
    def test_instance_of_itself(self, image, value):
        sigma = Substitution({"x": image})
        instance = Substitution({"x": Substitution({"y": value}).apply(image)})
        assert is_more_general(sigma, instance, ["x"])


def test_parse_helper_builds_canonical_terms():
    assert t("(b + a) + h(x + y)") == plus(a, b, h(plus(x, y)))
