"""File-backed persistence: array containers, dataset layout and experiment logs."""

from .container import decode_container, encode_container, read_container, write_container
from .csv_export import CSV_COLUMNS, export_csv
from .dataset_repository import FileDatasetRepository
from .layout import DatasetLayout, ratio_dirname
from .record_log import FileCycleRecordRepository

__all__ = [
    "CSV_COLUMNS",
    "DatasetLayout",
    "FileCycleRecordRepository",
    "FileDatasetRepository",
    "decode_container",
    "encode_container",
    "export_csv",
    "ratio_dirname",
    "read_container",
    "write_container",
]
