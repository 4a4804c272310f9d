import numpy as np
import pytest

from SignatureVAE.model_systems import (
    ForgeryModel,
    GENUINE_JITTER,
    RandomForgery,
    SkilledForgery,
    forgery_model_factory,
    gen_identity,
    parse_forgery_model,
    render,
)


def test_forgery_abstract():
    # Tests that the abstract class can not be instantiated.
    with pytest.raises(TypeError):
        ForgeryModel()  # type: ignore


@pytest.mark.parametrize("model, kind", [
    ("random", RandomForgery),
    ("skilled", SkilledForgery),
    ({"kind": "skilled", "jitter": 0.08}, SkilledForgery),
    (None, RandomForgery),
])
def test_parse_forgery_model(model, kind):
    assert isinstance(parse_forgery_model(model), kind)


def test_parse_passes_instances_through():
    model = SkilledForgery(jitter=0.1)
    assert parse_forgery_model(model) is model
    assert model.to_dict() == {"kind": "skilled", "jitter": 0.1}


def test_factory_errors():
    with pytest.raises(ValueError):
        forgery_model_factory("traced")
    with pytest.raises(ValueError):
        SkilledForgery(jitter=GENUINE_JITTER)


def test_skilled_forgery_stays_near_victim():
    victim = gen_identity(1)
    other = gen_identity(2)
    rng = np.random.default_rng(0)
    genuine = render(victim, GENUINE_JITTER, rng, 32)
    skilled = SkilledForgery(0.05).forge(victim, rng, 32)
    random = render(other, GENUINE_JITTER, rng, 32)
    assert skilled.shape == (32, 32)
    assert np.abs(skilled - genuine).mean() < np.abs(random - genuine).mean()


def test_random_forgery_draws_another_signer():
    victim = gen_identity(1)
    rng = np.random.default_rng(0)
    forged = RandomForgery().forge(victim, rng, 32)
    genuine = render(victim, 0.0, np.random.default_rng(0), 32)
    assert forged.shape == (32, 32)
    assert not np.array_equal(forged, genuine)
    assert forged.min() < 0.5
