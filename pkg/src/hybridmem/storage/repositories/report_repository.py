"""Repository for CSV and JSON reports"""
import json
from pathlib import Path
from typing import Any, Dict, Tuple

from .base import FileRepository, RepositoryError


class ReportRepository(FileRepository):
    """Writes `<name>.csv` and `<name>.json` pairs"""

    def save(self, name: str, entity: Tuple[str, Dict[str, Any]]) -> Path:
        csv_text, document = entity
        self.write_text(f"{name}.csv", csv_text)
        return self.write_text(f"{name}.json", json.dumps(document, indent=2, sort_keys=True) + '\n')

    def load(self, name: str) -> Dict[str, Any]:
        text = self.read_text(f"{name}.json")
        try:
            return json.loads(text)
        except json.JSONDecodeError as e:
            raise RepositoryError(f"Corrupt report {name}.json: {e}") from e

    def load_csv(self, name: str) -> str:
        return self.read_text(f"{name}.csv")
