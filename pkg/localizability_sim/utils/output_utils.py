"""
Utility functions for saving and loading run artifacts.
"""

import csv
import json
import os
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

from pydantic import BaseModel

from .. import config
from ..models.network_models import NetworkDocument
from ..services.graph_core import NetworkGraph
from ..utils.logger import logger


def results_path(filename: str) -> str:
    return os.path.join(config.RESULTS_DIR, filename)


def save_json_to_results(data: Union[Dict[str, Any], BaseModel], filename: str) -> bool:
    """Saves a dictionary (or a pydantic model) to a JSON file in the results directory."""
    try:
        config.RESULTS_DIR.mkdir(parents=True, exist_ok=True)
        file_path = results_path(filename)
        logger.info(f"Saving data to '{file_path}'...")
        with open(file_path, "w", encoding="utf-8") as f:
            if isinstance(data, BaseModel):
                f.write(data.model_dump_json(indent=2))
            else:
                json.dump(data, f, indent=2)
        logger.info(f"Successfully saved file: {filename}")
        return True
    except Exception as e:
        logger.error(f"Failed to save JSON file '{filename}': {e}", exc_info=True)
        return False


def save_csv_to_results(rows: Sequence[Sequence[Any]], header: List[str], filename: str) -> bool:
    try:
        config.RESULTS_DIR.mkdir(parents=True, exist_ok=True)
        file_path = results_path(filename)
        logger.info(f"Saving table to '{file_path}'...")
        with open(file_path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(header)
            writer.writerows(rows)
        logger.info(f"Successfully saved file: {filename}")
        return True
    except Exception as e:
        logger.error(f"Failed to save CSV file '{filename}': {e}", exc_info=True)
        return False


def save_network(net: NetworkGraph, filename: str = config.NETWORK_FILENAME) -> bool:
    """Writes the network document; edges are derived on load and never stored."""
    return save_json_to_results(net.to_document(), filename)


def load_network_document(path: Union[str, Path]) -> NetworkDocument:
    """Reads and validates a network document; pydantic errors propagate."""
    with open(path, "r", encoding="utf-8") as f:
        return NetworkDocument.model_validate_json(f.read())
