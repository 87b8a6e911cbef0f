import hashlib
import json
import logging
from pathlib import Path

import httpx

from cages.errors import FetchError, Graph6Error
from cages.graphcore import GRAPH6_HEADER, Graph, graph6_decode

logger = logging.getLogger(__name__)

INDEX_FILE = "index.json"

# JSON keys that may carry the graph6 string, checked in order
GRAPH6_KEYS = ("graph6", "canonicalForm", "canonical_form", "g6")


def _find_graph6(payload) -> str | None:
    """Depth-first search of a JSON payload for a graph6 field"""
    if isinstance(payload, dict):
        for key in GRAPH6_KEYS:
            value = payload.get(key)
            if isinstance(value, str) and value.strip():
                return value.strip()
        for value in payload.values():
            found = _find_graph6(value)
            if found:
                return found
    elif isinstance(payload, list):
        for item in payload:
            found = _find_graph6(item)
            if found:
                return found
    return None


def extract_graph6(body: str) -> str:
    """Pull a graph6 string out of a JSON or plain-text response body"""
    try:
        payload = json.loads(body)
    except json.JSONDecodeError:
        payload = None
    if payload is not None and not isinstance(payload, str):
        text = _find_graph6(payload)
        if text is None:
            raise FetchError("No graph6 field in JSON response")
        return text
    lines = [line.strip() for line in body.splitlines() if line.strip()]
    lines = [line for line in lines if line != GRAPH6_HEADER]
    if not lines:
        raise FetchError("Empty response body")
    return lines[0].removeprefix(GRAPH6_HEADER)


class ReferenceGraphClient:
    """Download House of Graphs entries and keep a content-addressed cache"""

    def __init__(
        self,
        url_template: str,
        cache_dir: str | Path,
        timeout: float = 30.0,
        transport: httpx.BaseTransport | None = None,
    ):
        self.url_template = url_template
        self.cache_dir = Path(cache_dir)
        self.timeout = timeout
        self.transport = transport

    def _index(self) -> dict[str, str]:
        path = self.cache_dir / INDEX_FILE
        if not path.exists():
            return {}
        with open(path, encoding="utf-8") as f:
            return json.load(f)

    def _save_index(self, index: dict[str, str]) -> None:
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        with open(self.cache_dir / INDEX_FILE, "w", encoding="utf-8") as f:
            json.dump(index, f, indent=2, sort_keys=True)

    def cached(self, graph_id: int) -> Graph | None:
        digest = self._index().get(str(graph_id))
        if digest is None:
            return None
        path = self.cache_dir / f"{digest}.g6"
        if not path.exists():
            return None
        return graph6_decode(path.read_text(encoding="utf-8").strip())

    def download(self, graph_id: int) -> str:
        url = self.url_template.format(id=graph_id)
        logger.info(f"Fetching reference graph {graph_id} from {url}")
        try:
            with httpx.Client(timeout=self.timeout, transport=self.transport, follow_redirects=True) as client:
                response = client.get(url)
                response.raise_for_status()
        except httpx.HTTPError as e:
            raise FetchError(f"Fetching graph {graph_id} failed: {e}") from e
        return extract_graph6(response.text)

    def fetch(self, graph_id: int, refresh: bool = False) -> Graph:
        """
        Return the graph with the given House of Graphs id.

        Args:
            graph_id: House of Graphs identifier
            refresh: Ignore the cache and download again

        Returns:
            The decoded graph
        """
        if graph_id < 1:
            raise FetchError(f"Invalid graph id {graph_id}")
        if not refresh:
            graph = self.cached(graph_id)
            if graph is not None:
                logger.debug(f"Graph {graph_id} served from cache")
                return graph

        text = self.download(graph_id)
        try:
            graph = graph6_decode(text)
        except Graph6Error as e:
            raise FetchError(f"Graph {graph_id} is not valid graph6: {e}") from e

        digest = hashlib.sha256(text.encode("ascii")).hexdigest()
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        (self.cache_dir / f"{digest}.g6").write_text(text + "\n", encoding="utf-8")
        index = self._index()
        index[str(graph_id)] = digest
        self._save_index(index)
        return graph


def fetch_reference_graph(graph_id: int, url_template: str, cache_dir: str | Path, timeout: float = 30.0) -> Graph:
    return ReferenceGraphClient(url_template, cache_dir, timeout).fetch(graph_id)
