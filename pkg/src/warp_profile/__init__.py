from src.warp_profile.profile import (
    RawProfile,
    WarpProfile,
    build_profile,
    constant_profile,
    eval_power,
    eval_profile,
    max_coefficient_ratio,
    profile_from_record,
    profile_record,
    smoothstep5,
)
from src.warp_profile.metric import WarpedMetricSpec, volume_element_ratio
