"""
This file contains the scheme registry and the subversion injectors that turn
a trusted build of a scheme into a subverted one.
"""

import logging
from enum import Enum
from typing import Any, Dict, Optional, Type, Union

from ..exceptions import ConfigurationError
from .base import BaseTarget
from .hashtree import HashtreeParams, HashtreeTarget
from .lattice import LatticeParams, LatticeTarget
from .primitives import PrimitiveKind, Primitives
from .uov import UovParams, UovTarget

logger = logging.getLogger(__name__)


class Scheme(str, Enum):
    LATTICE = "lattice"
    HASHTREE = "hashtree"
    UOV = "uov"


class SubversionVariant(str, Enum):
    """
    Build variants. TRUSTED applies no transform, PRNG and HASH swap one
    primitive for its weak substitute, SPARAM lowers the security parameters.
    """

    TRUSTED = "trusted"
    PRNG = "prng"
    HASH = "hash"
    SPARAM = "sparam"


SCHEMES: Dict[Scheme, Type[BaseTarget]] = {
    Scheme.LATTICE: LatticeTarget,
    Scheme.HASHTREE: HashtreeTarget,
    Scheme.UOV: UovTarget,
}

DEFAULT_PARAMS: Dict[Scheme, Type[Any]] = {
    Scheme.LATTICE: LatticeParams,
    Scheme.HASHTREE: HashtreeParams,
    Scheme.UOV: UovParams,
}


def _resolve(enum: Type[Enum], value: Union[str, Enum], kind: str) -> Any:
    try:
        return enum(value.value if isinstance(value, Enum) else str(value).lower())
    except ValueError:
        allowed = ", ".join(e.value for e in enum)
        raise ConfigurationError(f"Unknown {kind} '{value}'. Expected one of: {allowed}.")


def apply_subversion(
    scheme: Union[str, Scheme],
    variant: Union[str, SubversionVariant] = SubversionVariant.TRUSTED,
    params: Optional[Any] = None,
) -> BaseTarget:
    """
    Build the target of `scheme` for `variant`.

    Parameters
    ----------
    scheme : Union[str, Scheme]
        lattice, hashtree or uov.
    variant : Union[str, SubversionVariant], optional
        trusted, prng, hash or sparam, by default trusted
    params : Optional[Any], optional
        Trusted parameters of the scheme, by default the toy parameter set.

    Returns
    -------
    BaseTarget
        The configured target.

    Raises
    ------
    ConfigurationError
        If the scheme or variant is unknown, or `params` belong to another scheme.
    """

    resolved_scheme: Scheme = _resolve(Scheme, scheme, "scheme")
    resolved_variant: SubversionVariant = _resolve(SubversionVariant, variant, "variant")

    params_type = DEFAULT_PARAMS[resolved_scheme]
    if params is None:
        params = params_type()
    elif not isinstance(params, params_type):
        raise ConfigurationError(
            f"Parameters of type {type(params).__name__} do not belong to scheme {resolved_scheme.value}."
        )

    trusted_params = params
    primitives = Primitives()
    if resolved_variant == SubversionVariant.PRNG:
        primitives = Primitives(prng=PrimitiveKind.WEAK)
    elif resolved_variant == SubversionVariant.HASH:
        primitives = Primitives(hash=PrimitiveKind.WEAK)
    elif resolved_variant == SubversionVariant.SPARAM:
        params = params.sparam()

    logger.debug("Built %s-%s with %s", resolved_scheme.value, resolved_variant.value, params)
    return SCHEMES[resolved_scheme](
        params=params,
        primitives=primitives,
        variant=resolved_variant.value,
        verify_params=trusted_params,
    )
