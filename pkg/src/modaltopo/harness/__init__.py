from .census import census, to_csv
from .search import SearchResult, SearchSpec, countermodel_search
from .suites import FAIL, PASS, SUITES, VACUOUS, Report, replay_witness, run_property_suite

__all__ = ["census", "to_csv", "SearchResult", "SearchSpec", "countermodel_search",
           "FAIL", "PASS", "SUITES", "VACUOUS", "Report", "replay_witness",
           "run_property_suite"]
