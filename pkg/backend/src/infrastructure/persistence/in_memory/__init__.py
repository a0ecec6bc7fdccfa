"""In-memory persistence adapters."""

from .cycle_records import InMemoryCycleRecordRepository

__all__ = ["InMemoryCycleRecordRepository"]
