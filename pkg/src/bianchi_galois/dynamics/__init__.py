"""Flow integration, Poincare sections and batch orchestration."""

from .integrator import (FATES, BatchResult, IntegratorConfig, OrbitFate, SectionRecord, Trajectory,
                         crossings_from_brackets, detect_crossings, energy_drift, integrate_batch,
                         integrate_orbit, refine_crossing, restep)
from .sections import (CSV_HEADER, FateRecord, GridSpec, ICSolution, SectionResult, csv_text, emit,
                       energy_trend, read_csv, section_batch, solve_ic, svg_text)

__all__ = ["FATES", "BatchResult", "IntegratorConfig", "OrbitFate", "SectionRecord", "Trajectory",
           "crossings_from_brackets", "detect_crossings", "energy_drift", "integrate_batch",
           "integrate_orbit", "refine_crossing", "restep", "CSV_HEADER", "FateRecord", "GridSpec",
           "ICSolution", "SectionResult", "csv_text", "emit", "energy_trend", "read_csv",
           "section_batch", "solve_ic", "svg_text"]
