"""Black-box simulators and guidance."""
from pacstl.sim.duffing import G0_FOUR, G0_IDENTITY, DuffingStepper, duffing_derivative, duffing_sample_spec
from pacstl.sim.integrate import advance, integrate, rk4_step
from pacstl.sim.los import LOSGains, WaypointTracker, los_command, los_heading
from pacstl.sim.vessel import (
    FullState,
    VesselParams,
    VesselStepper,
    coriolis_matrix,
    kinematics,
    large_vessel,
    reduced_state,
    small_vessel,
    vessel_derivative,
    vessel_params,
)

__all__ = [
    "DuffingStepper", "G0_FOUR", "G0_IDENTITY", "duffing_sample_spec", "FullState", "LOSGains", "VesselParams", "VesselStepper", "WaypointTracker", "advance",
    "coriolis_matrix", "duffing_derivative", "integrate", "kinematics", "large_vessel", "los_command",
    "los_heading", "reduced_state", "rk4_step", "small_vessel", "vessel_derivative", "vessel_params",
]
