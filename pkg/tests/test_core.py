"""Family/Cpf contract basics."""

import numpy as np
import pytest

from dshlab.core import ARGUMENT_SEMANTICS, Cpf, DshFamily
from dshlab.hamming import bit_sampling_family


def test_cpf_kind_validation():
    with pytest.raises(ValueError):
        Cpf(kind="magic", eval=lambda t: t, argument_semantics=ARGUMENT_SEMANTICS[0])
    with pytest.raises(ValueError):
        Cpf(kind="closed_form", eval=None, argument_semantics=ARGUMENT_SEMANTICS[0])
    with pytest.raises(ValueError):
        Cpf(kind="empirical", eval=lambda t: t, argument_semantics=ARGUMENT_SEMANTICS[0])
    with pytest.raises(ValueError):
        Cpf(kind="closed_form", eval=lambda t: t, argument_semantics="furlongs")


def test_empirical_cpf_refuses_to_evaluate():
    c = Cpf(kind="empirical", eval=None, argument_semantics="inner-product")
    with pytest.raises(ValueError):
        c(0.5)


def test_family_rejects_bad_domain_and_dimension():
    with pytest.raises(ValueError):
        DshFamily("torus", 4, None, "t")
    with pytest.raises(ValueError):
        DshFamily("hamming", 0, None, "z")


def test_sample_pair_is_deterministic_in_seed():
    fam = bit_sampling_family(16)
    x = np.ones(16, dtype=np.uint8)
    a = [fam.sample_pair(s).h(x) for s in range(20)]
    b = [fam.sample_pair(s).h(x) for s in range(20)]
    assert a == b


def test_sampled_pair_carries_domain_metadata():
    fam = bit_sampling_family(16)
    pair = fam.sample_pair(0)
    assert pair.domain_tag == "hamming"
    assert pair.dimension == 16


def test_base_batch_collide_matches_cpf():
    # definitional per-trial path on the simplest family
    fam = bit_sampling_family(8)
    rng = np.random.default_rng(3)
    xs = rng.integers(0, 2, size=(4000, 8)).astype(np.uint8)
    ys = xs.copy()
    ys[:, 0] ^= 1  # exactly 1/8 relative distance
    hits = DshFamily._batch_collide(fam, xs, ys, np.random.default_rng(4))
    est = hits.mean()
    assert abs(est - 0.875) < 3 * np.sqrt(0.875 * 0.125 / 4000)
