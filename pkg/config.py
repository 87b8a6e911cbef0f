import os
from dataclasses import dataclass, field


def _flag(name: str, default: str) -> bool:
    return os.getenv(name, default).strip().lower() in ("1", "true", "yes", "on")


def _ceilings(raw: str) -> dict[int, int]:
    """Parse "3:12,4:10" into {3: 12, 4: 10}"""
    result = {}
    for item in filter(None, (part.strip() for part in raw.split(","))):
        k, n = item.split(":")
        result[int(k)] = int(n)
    return result


@dataclass
class Config:
    """Application configuration"""

    # Graph capacity
    max_vertices: int = int(os.getenv("CAGES_MAX_VERTICES", "512"))

    # Search settings
    memo_cap: int = int(os.getenv("CAGES_MEMO_CAP", "1000000"))
    split_depth: int = int(os.getenv("CAGES_SPLIT_DEPTH", "4"))
    workers: int = int(os.getenv("CAGES_WORKERS", "1"))
    fallback_tree: bool = _flag("CAGES_FALLBACK_TREE", "false")
    budget_seconds: float = float(os.getenv("CAGES_BUDGET_SECONDS", "600"))

    # Storage
    catalog_dir: str = os.getenv("CAGES_CATALOG_DIR", "catalog_data")
    cache_dir: str = os.getenv("CAGES_CACHE_DIR", ".cache/reference_graphs")

    # House of Graphs client
    hog_url_template: str = os.getenv(
        "CAGES_HOG_URL", "https://houseofgraphs.org/api/graphs/{id}"
    )
    http_timeout: float = float(os.getenv("CAGES_HTTP_TIMEOUT", "30"))

    # Oracle limits, largest order per degree
    oracle_ceilings: dict[int, int] = field(
        default_factory=lambda: _ceilings(os.getenv("CAGES_ORACLE_CEILINGS", "3:12,4:10,5:10"))
    )

    def validate(self) -> bool:
        """Validate configuration ranges"""
        if not 1 <= self.max_vertices <= 512:
            raise ValueError("CAGES_MAX_VERTICES must be between 1 and 512")
        if self.workers < 1:
            raise ValueError("CAGES_WORKERS must be at least 1")
        if self.split_depth < 0:
            raise ValueError("CAGES_SPLIT_DEPTH must be non-negative")
        if self.memo_cap < 0:
            raise ValueError("CAGES_MEMO_CAP must be non-negative")
        if self.budget_seconds <= 0:
            raise ValueError("CAGES_BUDGET_SECONDS must be positive")
        if "{id}" not in self.hog_url_template:
            raise ValueError("CAGES_HOG_URL must contain an {id} placeholder")
        return True

    def oracle_ceiling(self, k: int) -> int:
        return self.oracle_ceilings.get(k, 8)


config = Config()
