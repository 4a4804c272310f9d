from abc import ABC, abstractmethod
from typing import Union

import numpy as np

from .signatures import GENUINE_JITTER, IdentitySpec, gen_identity, render


class ForgeryModel(ABC):
    """
    Abstract class that is the basis for forgery models.

    A forgery model turns the skeleton of a victim into a forged image.
    """

    kind = None

    @abstractmethod
    def forge(self, victim: IdentitySpec, rng: np.random.Generator, size: int):
        pass

    def to_dict(self) -> dict:
        return {"kind": self.kind}


class SkilledForgery(ForgeryModel):
    """
    Forger who has studied the genuine signature: the victim's skeleton drawn
    with a shakier hand.

    Parameters
    ----------
    * `jitter` [float, default=0.05]:
        Control point perturbation scale. Must exceed the genuine jitter.
    """

    kind = "skilled"

    def __init__(self, jitter: float = 0.05):
        if jitter <= GENUINE_JITTER:
            raise ValueError(
                "Skilled forgery jitter must exceed the genuine jitter %r, got %r"
                % (GENUINE_JITTER, jitter)
            )
        self.jitter = jitter

    def forge(self, victim, rng, size):
        return render(victim, self.jitter, rng, size)

    def to_dict(self):
        return {"kind": self.kind, "jitter": self.jitter}


class RandomForgery(ForgeryModel):
    """
    Forger without access to the genuine signature: a different signer's
    signature, drawn with genuine-level jitter.
    """

    kind = "random"

    def forge(self, victim, rng, size):
        seed = int(rng.integers(2**62))
        while seed == victim.seed:
            seed = int(rng.integers(2**62))
        return render(gen_identity(seed), GENUINE_JITTER, rng, size)


def parse_forgery_model(
    model: Union[str, dict, ForgeryModel, None], **kwargs
) -> ForgeryModel:
    if isinstance(model, ForgeryModel):
        return model
    elif isinstance(model, str):
        return forgery_model_factory(kind=model, **kwargs)
    elif model is None:
        return RandomForgery()
    else:
        return forgery_model_factory(**model)


def forgery_model_factory(kind: str, **kwargs) -> ForgeryModel:
    if kind == "skilled":
        return SkilledForgery(**kwargs)
    elif kind == "random":
        return RandomForgery(**kwargs)
    else:
        raise ValueError(f"Forgery model of kind '{kind}' not recognised")
