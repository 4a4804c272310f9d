from .forgery_models import RandomForgery, SkilledForgery
from .model_system import SignatureSystem


def get_model_system(model_system: str, **kwargs) -> SignatureSystem:
    """
    Get the signature system for the given preset name.

    Presets:
        "easy": random forgeries, another signer's signature.
        "hard": skilled forgeries at jitter 0.05.

    Parameters
    ----------
    * `model_system` [str]:
        The name of the preset.

    * `kwargs`:
        Passed on to `SignatureSystem`, e.g. `size`.

    Returns
    -------
    * `model_system` [SignatureSystem]:
        The signature system.
    """
    creator_dict = {
        "easy": lambda: RandomForgery(),
        "random": lambda: RandomForgery(),
        "hard": lambda: SkilledForgery(jitter=0.05),
        "skilled": lambda: SkilledForgery(jitter=0.05),
    }
    if model_system not in creator_dict:
        raise ValueError(
            f"Model system {model_system} not found. "
            f"Choose from {list(creator_dict.keys())}."
        )
    return SignatureSystem(forgery=creator_dict[model_system](), **kwargs)
