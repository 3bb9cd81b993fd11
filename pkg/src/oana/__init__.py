from src.oana.landmarks import (
    UNCHANGED,
    LandmarkState,
    NystromMap,
    UpdateOutcome,
    feature_map,
    init_landmarks,
    maybe_update_landmarks,
    nearest_landmark,
    rank2_delta,
    state_from_dict,
    state_to_dict,
)

__all__ = [
    "UNCHANGED",
    "LandmarkState",
    "NystromMap",
    "UpdateOutcome",
    "feature_map",
    "init_landmarks",
    "maybe_update_landmarks",
    "nearest_landmark",
    "rank2_delta",
    "state_from_dict",
    "state_to_dict",
]
