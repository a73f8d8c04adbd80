"""Bundled survey-variable schemas and reproduction-profile configs.

Transcribes the documented variable representations of the source
survey: the common biological/social variables shared by both tasks,
the anemia supplement (with hemoglobin as the label source, or the
pre-binned status levels as an alternate path) and the malaria
supplement (recorded test result as the label source).

"Don't Know" variants are category levels, not missing codes: the survey
encodes them as legitimate answers.
"""

from __future__ import annotations

from .data_model import (
    AnemiaRule,
    Categorical,
    MalariaRule,
    Numeric,
    Role,
    Schema,
    VariableSpec,
)

SENEGAL_REGIONS = (
    "Dakar",
    "Ziguinchor",
    "Diourbel",
    "Matam",
    "Saint-Louis",
    "Tambacounda",
    "Thies",
    "Kaolack",
    "Louga",
    "Fatick",
    "Kolda",
    "Kaffrine",
    "Kedougou",
)

WATER_SOURCES = (
    "Piped into dwelling",
    "Piped to yard",
    "Public tap",
    "Tube well",
    "Protected well",
    "Unprotected well",
    "River or lake",
    "Cart with small tank",
    "Bottled water",
)

OCCUPATIONS = (
    "Not working",
    "Sales",
    "Agricultural self-employed",
    "Household and domestic",
    "Services",
    "Skilled manual",
    "Unskilled manual",
)

_NO_YES = ("No", "Yes")
_NO_YES_DK = ("No", "Yes", "Don't Know")


def common_variables() -> tuple[VariableSpec, ...]:
    """Variables shared by the anemia and malaria tasks."""
    return (
        VariableSpec("Sex of child", Categorical(("Male", "Female"))),
        VariableSpec("Child height", Numeric()),
        VariableSpec("Currently amenorrhic", Categorical(_NO_YES)),
        VariableSpec("Number of antenatal visits during pregnancy", Numeric()),
        VariableSpec("Region", Categorical(SENEGAL_REGIONS)),
        VariableSpec("Type place of residence", Categorical(("Urban", "Rural"))),
        VariableSpec(
            "Highest educational level",
            Categorical(("No Education", "Primary", "Secondary", "Higher")),
        ),
        VariableSpec("Source of drinking water", Categorical(WATER_SOURCES)),
        VariableSpec("Respondent's occupation", Categorical(OCCUPATIONS)),
    )


def _anemia_supplement() -> tuple[VariableSpec, ...]:
    return (
        VariableSpec(
            "Received Measles",
            Categorical(
                (
                    "No",
                    "Vaccination date on card",
                    "Reported by mother",
                    "Marked on card",
                    "Don't know",
                )
            ),
        ),
        VariableSpec("Vitamin A in last 6 months", Categorical(_NO_YES_DK)),
        VariableSpec("Currently breastfeeding", Categorical(_NO_YES)),
        VariableSpec("Drugs for intestinal parasites in last 6 months", Categorical(_NO_YES_DK)),
        VariableSpec("Drank from bottle with nipple last night", Categorical(_NO_YES_DK)),
        VariableSpec(
            "Number of times ate solid, semi solid or soft food yesterday",
            Categorical(("None", "1", "2", "3", "4", "5", "6", "7+", "Don't know")),
        ),
        VariableSpec("First 3 days given infant formula", Categorical(_NO_YES)),
        VariableSpec("First 3 days given tea, infusions", Categorical(_NO_YES)),
        VariableSpec("First 3 days given other", Categorical(_NO_YES)),
        VariableSpec(
            "Has health card",
            Categorical(("No Card", "Yes seen", "Yes not seen", "No longer has card")),
        ),
    )


def anemia_schema() -> Schema:
    """Anemia task schema, labels derived from raw hemoglobin (g/dl)."""
    variables = (
        *common_variables(),
        *_anemia_supplement(),
        VariableSpec("Hemoglobin level", Numeric(), role=Role.LABEL_SOURCE),
    )
    return Schema(variables, AnemiaRule())


def anemia_schema_prebinned() -> Schema:
    """Anemia task schema over the already-binned status levels."""
    variables = (
        *common_variables(),
        *_anemia_supplement(),
        VariableSpec(
            "Anaemia level",
            Categorical(("Severe", "Moderate", "Mild", "Not anaemic")),
            role=Role.LABEL_SOURCE,
        ),
    )
    return Schema(variables, AnemiaRule(from_prebinned=True))


def malaria_schema() -> Schema:
    """Malaria task schema, labels from the recorded blood-test result."""
    variables = (
        *common_variables(),
        VariableSpec("Respondent's current age", Numeric()),
        VariableSpec("Currently pregnant", Categorical(_NO_YES)),
        VariableSpec("Received Vitamin A dose in first 2 months", Categorical(_NO_YES_DK)),
        VariableSpec("Had fever in last two weeks", Categorical(_NO_YES)),
        VariableSpec("Had cough in last two weeks", Categorical(_NO_YES)),
        VariableSpec(
            "Result of malaria test",
            Categorical(("Positive", "Negative")),
            role=Role.LABEL_SOURCE,
        ),
        VariableSpec("Season of Interview", Categorical(("Rainy season", "Dry season"))),
        VariableSpec("Household has Electricity", Categorical(_NO_YES)),
    )
    return Schema(variables, MalariaRule())


TASK_SCHEMAS = {
    "anemia": anemia_schema,
    "anemia_prebinned": anemia_schema_prebinned,
    "malaria": malaria_schema,
}

# Reported per-stage removal counts for the reproduction profiles. The
# source accounting gives removals, not kept counts, so configs carry
# them as `remove` values resolved against the live column count.
REPRODUCTION_RFE_REMOVE = {"anemia": 10, "malaria": 5}
REPRODUCTION_PCA_REMOVE = {"anemia": 2, "malaria": 7}


def reproduction_config_yaml(task: str) -> str:
    """Config template for re-running a task against a real extract."""
    if task not in ("anemia", "malaria"):
        raise ValueError(f"reproduction profiles exist for anemia and malaria, not {task!r}")
    return f"""\
# Reproduction profile for the {task} task.
# The split protocol of the original study is unstated; the 75/25
# stratified holdout below is this toolkit's documented assumption.
task: {task}
seed: 20160101          # choose your own; seeds are mandatory
input: {task}.csv       # point at your survey extract
output: {task}_report.json
ingest:
  sparse_threshold: 0.5
  standardize: true
select:
  correlation_threshold: 0.75
  rfe:
    remove: {REPRODUCTION_RFE_REMOVE[task]}
  pca:
    remove: {REPRODUCTION_PCA_REMOVE[task]}
algorithms:
  knn: {{k: 5, metric: euclidean}}
  random_forest: {{n_trees: 100}}
  svm: {{C: 10.0}}
  naive_bayes: {{laplace_alpha: 1.0}}
split:
  kind: holdout
  test_fraction: 0.25
"""
