"""Repository pattern implementations"""

from .base import BaseRepository, FileRepository, RepositoryError
from .report_repository import ReportRepository
from .trace_repository import TraceRepository

__all__ = [
    'BaseRepository',
    'FileRepository',
    'RepositoryError',
    'ReportRepository',
    'TraceRepository',
]
