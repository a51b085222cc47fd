"""Upper-half-space PSL(2,C) geometry toolkit.

Builds pants and hamster-wheel components, glues them into assemblies,
develops them in H^3, measures distortion against perfect models, runs the
cusp/height machinery (excursions, bald spots, umbrellas) and the torsor
matching pipeline.
"""

from .moebius import (
    MoebiusMap,
    Frame,
    MarkedGeodesic,
    TorsorPoint,
    complex_distance,
    common_orthogonal,
    translation_length,
    foot_coordinate,
    frame_delta,
    frame_distance,
    torus_distance,
)

__version__ = "0.1.0"
