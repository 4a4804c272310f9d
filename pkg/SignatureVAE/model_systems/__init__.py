from .signatures import (
    IdentitySpec,
    GENUINE_JITTER,
    gen_identity,
    render,
    stroke_curve,
)
from .forgery_models import (
    ForgeryModel,
    SkilledForgery,
    RandomForgery,
    parse_forgery_model,
    forgery_model_factory,
)
from .model_system import SignatureSystem, make_dataset, write_dataset
from .model_system_getter import get_model_system

__all__ = [
    "IdentitySpec",
    "GENUINE_JITTER",
    "gen_identity",
    "render",
    "stroke_curve",
    "ForgeryModel",
    "SkilledForgery",
    "RandomForgery",
    "parse_forgery_model",
    "forgery_model_factory",
    "SignatureSystem",
    "make_dataset",
    "write_dataset",
    "get_model_system",
]
