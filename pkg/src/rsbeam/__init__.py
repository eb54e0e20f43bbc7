"""Max-min fair multigroup multicast beamforming with rate splitting."""

__version__ = "0.1.0"

from .model import (  # noqa: F401
    ChannelSet,
    PrecoderSet,
    RateBreakdown,
    Strategy,
    SystemConfig,
    mmf_objective,
    rates,
    receive_powers,
)
