"""Catalogue of psd-minimal 4-polytope classes and their characterizations."""

from .binomials import Binomial, binomial_check, binomial_report, bipartite_pattern, cycle_binomials
from .conditions import octic_14, quartic_12
from .records import ClassRecord, build_class, load_catalogue, record
from .templates import (
    Template,
    TemplateMatch,
    TemplateMismatch,
    condition_value,
    load_templates,
    match_template,
    template_hook,
)
from .verify import ClassReport, verify_all, verify_class

__all__ = [
    "Binomial",
    "ClassRecord",
    "ClassReport",
    "Template",
    "TemplateMatch",
    "TemplateMismatch",
    "binomial_check",
    "binomial_report",
    "bipartite_pattern",
    "build_class",
    "condition_value",
    "cycle_binomials",
    "load_catalogue",
    "load_templates",
    "match_template",
    "octic_14",
    "quartic_12",
    "record",
    "template_hook",
    "verify_all",
    "verify_class",
]
