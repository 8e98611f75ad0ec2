"""Base repository for file persistence"""
import logging
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Union

from ...services.exceptions import HybridMemError

logger = logging.getLogger(__name__)


class RepositoryError(HybridMemError):
    """Base exception for repository operations"""
    pass


class BaseRepository(ABC):
    """Abstract base repository with essential operations"""

    @abstractmethod
    def save(self, name: str, entity) -> Path:
        """Persist entity under name"""
        pass

    @abstractmethod
    def load(self, name: str):
        """Load the entity stored under name"""
        pass


class FileRepository(BaseRepository):
    """Text files under a root directory"""

    def __init__(self, root: Union[str, Path]):
        self.root = Path(root)
        self.logger = logging.getLogger(f"{__name__}.{type(self).__name__}")

    def path_for(self, name: str) -> Path:
        path = Path(name)
        return path if path.is_absolute() else self.root / path

    def write_text(self, name: str, text: str) -> Path:
        path = self.path_for(name)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding='utf-8')
        except OSError as e:
            self.logger.error(f"Error writing {path}: {e}")
            raise RepositoryError(f"Failed to write {path}: {e}") from e
        self.logger.info(f"Wrote {path}")
        return path

    def read_bytes(self, name: str) -> bytes:
        path = self.path_for(name)
        try:
            return path.read_bytes()
        except OSError as e:
            self.logger.error(f"Error reading {path}: {e}")
            raise RepositoryError(f"Failed to read {path}: {e}") from e

    def read_text(self, name: str) -> str:
        data = self.read_bytes(name)
        try:
            return data.decode('utf-8')
        except UnicodeDecodeError as e:
            self.logger.error(f"Error decoding {self.path_for(name)}: {e}")
            raise RepositoryError(f"{self.path_for(name)} is not valid UTF-8: {e}") from e
