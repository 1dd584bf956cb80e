"""Maritime encounter monitoring."""
from pacstl.maritime.baseline import BaselineRow, compare, point_values, run_baseline, sample_ego_trajectories
from pacstl.maritime.rules import (
    ENCOUNTERS,
    TIME_HORIZON,
    EncounterMonitor,
    EncounterParams,
    MonitorOutput,
    TubeBank,
    atomic_signals,
    build_encounter_spec,
    encounter_atomics,
    encounter_formula,
    evasive_waypoints,
    monitor_step,
    predict_ego,
    tube_frame_transform,
)
from pacstl.maritime.scenario import (
    LOG_COLUMNS,
    SCENARIOS,
    RunLog,
    ScenarioConfig,
    aggregate,
    hulls_overlap,
    run_scenario,
)
from pacstl.maritime.tubes import BUCKETS, bucket_spec, build_bank_tubes, build_bucket_tube

__all__ = [
    "BUCKETS", "BaselineRow", "ENCOUNTERS", "LOG_COLUMNS", "SCENARIOS", "TIME_HORIZON", "EncounterMonitor", "EncounterParams",
    "MonitorOutput", "RunLog", "ScenarioConfig", "TubeBank", "aggregate", "atomic_signals", "bucket_spec",
    "build_bank_tubes", "build_bucket_tube", "build_encounter_spec", "compare", "encounter_atomics",
    "encounter_formula", "evasive_waypoints", "hulls_overlap", "monitor_step", "point_values", "predict_ego",
    "run_baseline", "run_scenario", "sample_ego_trajectories", "tube_frame_transform",
]
