"""Domain repository interfaces (Ports)."""

from .cycle_record_repository import ICycleRecordRepository
from .dataset_repository import SERIES_KINDS, IDatasetRepository

__all__ = [
    "ICycleRecordRepository",
    "IDatasetRepository",
    "SERIES_KINDS",
]
