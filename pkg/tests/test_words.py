from hypothesis import given, strategies as st

from rigiditylab.words import Alphabet, Word, class_keys, conjugacy_key, cyclic_reduce

AB = Alphabet(["a", "b"])
letters = st.lists(st.tuples(st.sampled_from("ab"), st.sampled_from([1, -1])), max_size=8)


def test_parse_and_format_round_trip():
    for text in ["a^3 b^-2", "a b a^-1", "1", "z^{2} a"]:
        w = Word.parse(text)
        assert Word.parse(str(w)) == w
    assert str(Word.parse("z^{2} a")) == "z^2 a"


def test_free_reduction():
    assert Word.parse("a b b^-1 a^-1").is_empty()
    assert Word.parse("a a a") == Word.generator("a", 3)


def test_shortlex_enumeration_order():
    words = [str(w) for w in AB.enumerate(1)]
    assert words == ["a", "a^-1", "b", "b^-1"]
    keys = [AB.key(w) for w in AB.enumerate(3)]
    assert keys == sorted(keys)
    # reduced words of length <= 3 in F_2: 4 + 12 + 36
    assert len(keys) == 52


@given(letters)
def test_inverse_is_inverse(seq):
    w = Word(seq)
    assert (w * w.inverse()).is_empty()


@given(letters, st.integers(0, 7))
def test_key_is_rotation_invariant(seq, r):
    w = cyclic_reduce(Word(seq))
    ls = w.letters()
    if not ls:
        return
    r %= len(ls)
    rotated = Word(ls[r:] + ls[:r])
    assert conjugacy_key(rotated, AB) == conjugacy_key(w, AB)


@given(letters)
def test_key_identifies_inverse_unless_oriented(seq):
    w = Word(seq)
    assert conjugacy_key(w.inverse(), AB) == conjugacy_key(w, AB)
    assert conjugacy_key(conjugacy_key(w, AB, True), AB, True) == conjugacy_key(w, AB, True)


def test_class_keys_cover_every_word():
    keys = set(class_keys(AB, 3))
    for w in AB.enumerate(3):
        assert conjugacy_key(w, AB) in keys
    assert all(conjugacy_key(k, AB) == k for k in keys)


def test_oriented_keys_separate_inverses():
    assert len(class_keys(AB, 2, oriented=True)) > len(class_keys(AB, 2))
