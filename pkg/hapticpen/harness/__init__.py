from hapticpen.harness.expansion import FullFactorial, Trial, TrialSchedule, build_schedule
from hapticpen.harness.participants import ParticipantModel, make_panel
from hapticpen.harness.stats import AnovaResult, rm_anova_oneway
from hapticpen.harness.results import ExperimentResult
from hapticpen.harness.experiments import (
    run_experiment1,
    run_experiment2,
    run_experiment3,
    dominant_labels,
    waveform_anova,
)
from hapticpen.harness.tops import (
    Condition,
    GameState,
    ApparentStep,
    apparent_step,
    run_spinning_tops,
    compare_conditions,
    GAME_EXPERIMENTS,
)
