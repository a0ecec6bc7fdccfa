"""
Hierarchical temporal aggregation of lead times.

A target lead is reached with the fewest model calls by greedily taking the
largest supported lead that still fits.
"""

from __future__ import annotations

from collections.abc import Iterable

from src.domain.entities.lead import LeadDecomposition
from src.domain.entities.state import FloatArray, StateField
from src.domain.exceptions import DecompositionError

from .base import DynamicsModel


def greedy_decompose(target_lead: int, supported_leads: Iterable[int]) -> LeadDecomposition:
    """Split target_lead into non-increasing supported leads.

    Raises:
        DecompositionError: Non-positive target, or a non-zero remainder
            smaller than every supported lead.
    """
    leads = sorted({int(v) for v in supported_leads if int(v) > 0}, reverse=True)
    if not leads:
        raise DecompositionError("No positive supported leads to decompose with.")
    if target_lead <= 0:
        raise DecompositionError(f"Target lead must be > 0, got {target_lead}")

    steps: list[int] = []
    remaining = target_lead
    while remaining > 0:
        fitting = next((lead for lead in leads if lead <= remaining), None)
        if fitting is None:
            raise DecompositionError(
                f"Cannot reach {target_lead} h with leads {leads}: {remaining} h left"
            )
        steps.append(fitting)
        remaining -= fitting
    return LeadDecomposition(target_lead=target_lead, steps=tuple(steps))


def forecast_hta(model: DynamicsModel, state: StateField, target_lead: int) -> StateField:
    """Forecast `target_lead` hours ahead along the greedy decomposition."""
    decomposition = greedy_decompose(target_lead, model.supported_leads)
    for lead in decomposition.steps:
        state = model.step(state, lead)
    return state


def propagate_array(model: DynamicsModel, x: FloatArray, hours: int) -> FloatArray:
    """Flat-array forecast along the greedy decomposition; zero hours is a no-op."""
    if hours == 0:
        return x
    for lead in greedy_decompose(hours, model.supported_leads).steps:
        x = model.step_array(x, lead)
    return x
