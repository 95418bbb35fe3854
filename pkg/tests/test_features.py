from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_image
from reference import reference_walk
from touristwalk.features import (ExtractionConfig, JointDistribution, extract, feature_slice,
                                  format_value, histogram, read_feature_csv, write_feature_csv)
from touristwalk.image import DataError, GrayImage
from touristwalk.sampling import ALL, KSpec, select_starts
from touristwalk.walk import Rule, WalkConfig, run_batch


def dist(counts, total=None, mu=1, rule=Rule.MIN):
    return JointDistribution(counts, total if total is not None else sum(counts.values()), mu, rule)


def test_histogram_examples():
    d = dist({(0, 2): 5})
    assert histogram(d, 2) == 1
    assert histogram(d, 3) == 0
    u = dist({(0, 2): 1, (1, 1): 1}, mu=0)
    assert histogram(u, 2) == 1


def test_histogram_ignores_no_attractor_bucket():
    d = dist({(2, 0): 1, (0, 2): 3})
    assert histogram(d, 2) == Fraction(3, 4)
    with pytest.raises(ValueError):
        histogram(d, 0)


def test_feature_slice():
    assert feature_slice(dist({(0, 2): 4}), 1, 4) == [1, 0, 0, 0]
    with pytest.raises(ValueError):
        feature_slice(dist({(0, 2): 4}), 2, 4)


def test_mu0_min_slice_is_constant(rng):
    img = random_image(rng, 12, 12)
    d = run_batch(img, select_starts(img, ALL), WalkConfig(0, Rule.MIN))
    assert feature_slice(d, 0, 4) == [1, 0, 0, 0]


def test_slice_matches_reference_histogram():
    rng = np.random.default_rng(7)
    img = random_image(rng, 16, 16)
    d = run_batch(img, select_starts(img, ALL), WalkConfig(2, Rule.MAX))
    grid = img.pixels.tolist()
    lengths = {}
    for x in range(16):
        for y in range(16):
            tau, rho, _ = reference_walk(grid, (x, y), 2, "max")
            if rho:
                lengths[tau + rho] = lengths.get(tau + rho, 0) + 1
    expected = [Fraction(lengths.get(l, 0), 256) for l in range(3, 7)]
    got = feature_slice(d, 2, 4)
    assert got == expected
    assert sum(got) <= 1


def test_default_layout():
    cfg = ExtractionConfig()
    assert cfg.dimension == 56
    assert cfg.layout[:4] == tuple((Rule.MIN, 0, l) for l in range(1, 5))
    assert cfg.layout[-1] == (Rule.MAX, 6, 10)
    img = random_image(np.random.default_rng(1), 10, 10)
    fv = extract(img, cfg)
    assert len(fv) == 56 and fv.layout == cfg.layout
    assert all(0 <= v <= 1 for v in fv.values)


def test_config_validation():
    with pytest.raises(ValueError):
        ExtractionConfig(mu_list=())
    with pytest.raises(ValueError):
        ExtractionConfig(mu_list=(2, 1))
    with pytest.raises(ValueError):
        ExtractionConfig(m=0)
    assert ExtractionConfig(rules=(Rule.MAX, Rule.MIN)).rules == (Rule.MIN, Rule.MAX)


def test_constant_image_subset_invariance():
    img = GrayImage(np.full((12, 12), 90, np.uint8))
    cfg = ExtractionConfig(mu_list=(0,), rules=(Rule.MIN, Rule.MAX))
    a = extract(img, cfg)
    b = extract(img, ExtractionConfig(mu_list=(0,), k_spec=KSpec((2,))))
    assert a.values == b.values


def test_subsampling_is_small_perturbation():
    rng = np.random.default_rng(3)
    img = random_image(rng, 48, 48)
    full = extract(img).to_array()
    sub = extract(img, ExtractionConfig(k_spec=KSpec((10,)))).to_array()
    assert np.abs(full - sub).max() < 0.05


@settings(max_examples=25, deadline=None)
@given(st.integers(3, 14), st.integers(3, 14), st.integers(0, 2**32 - 1))
def test_block_normalisation_and_support(h, w, seed):
    rng = np.random.default_rng(seed)
    img = random_image(rng, h, w, levels=int(rng.choice([4, 256])))
    for rule in Rule:
        for mu in range(5):
            d = run_batch(img, select_starts(img, ALL), WalkConfig(mu, rule))
            lengths = d.length_counts()
            assert all(l >= mu + 1 for l in lengths)
            assert all(histogram(d, l) == 0 for l in range(1, mu + 1))
            attract = sum(c for (t, r), c in d.counts.items() if r > 0)
            assert sum(lengths.values()) == attract <= d.total


def test_extract_thread_invariance():
    img = random_image(np.random.default_rng(9), 30, 30)
    assert extract(img, threads=1).values == extract(img, threads=4).values


def test_format_value():
    assert format_value(Fraction(1, 3)) == "0.333333333"
    assert format_value(Fraction(2, 3)) == "0.666666667"
    assert format_value(Fraction(1)) == "1.000000000"
    assert format_value(Fraction(0)) == "0.000000000"
    assert format_value(Fraction(1, 2 * 10 ** 9)) == "0.000000000"  # half to even
    assert format_value(Fraction(3, 2 * 10 ** 9)) == "0.000000002"


def test_csv_round_trip(tmp_path):
    rows = [("b", "s1", [Fraction(1, 4), Fraction(1, 3)]), ("a", "s2", [0, 1])]
    write_feature_csv(rows, tmp_path / "f.csv")
    text = (tmp_path / "f.csv").read_text()
    assert text.splitlines()[0] == "class,sample,f1,f2"
    assert text.splitlines()[1] == "b,s1,0.250000000,0.333333333"
    fm = read_feature_csv(tmp_path / "f.csv")
    assert fm.classes == ["a", "b"]
    assert fm.labels.tolist() == [1, 0]
    np.testing.assert_allclose(fm.X, [[0.25, 0.333333333], [0, 1]])


def test_csv_errors(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("class,sample,f1\na,s,0.1\nb,t,oops\n")
    with pytest.raises(DataError, match=":3:"):
        read_feature_csv(p)
    p.write_text("class,sample,f1\na,s,0.1,0.2\n")
    with pytest.raises(DataError, match=":2:"):
        read_feature_csv(p)
    p.write_text("x,y\n")
    with pytest.raises(DataError):
        read_feature_csv(p)
