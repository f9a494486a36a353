"""Case studies: scenario data, assembly, runners and report emitters."""
from .assemble import assemble, storage_family
from .runners import (Check, ExperimentReport, FlexibilityReport, ModelRun, Schedule, realizable_reserves,
                      reserve_flexibility_report, run_case, run_multiperiod_uc, run_scenario, run_tep, run_uc)
from .scenario import CASES, DATA_ENV, DATASETS, GeneratorSpec, LineSpec, Scenario, data_dir, load_case, scenario_path

__all__ = [
    "Scenario", "GeneratorSpec", "LineSpec", "load_case", "scenario_path", "data_dir", "CASES", "DATASETS", "DATA_ENV",
    "assemble", "storage_family", "run_case", "run_scenario", "run_uc", "run_tep", "run_multiperiod_uc",
    "ExperimentReport", "ModelRun", "Check", "Schedule", "FlexibilityReport", "reserve_flexibility_report",
    "realizable_reserves",
]
