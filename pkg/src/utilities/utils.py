from typing import Any, Dict, List, Optional
import json
import os

import pandas as pd

from src.constants import Constants
from src.utilities.logger import Logger


class Utils:
    def __init__(self):
        self.logger = Logger()

    @staticmethod
    def float_format(digits: int = Constants.FLOAT_DIGITS) -> str:
        return f"%.{digits}g"

    @staticmethod
    def load_json(file_path: str) -> Dict[str, Any]:
        """
        Load JSON file
        """
        try:
            with open(file_path, 'r') as f:
                return json.load(f)
        except Exception as e:
            Logger().error(f"Error loading JSON file: {str(e)}")
            raise

    @staticmethod
    def save_json(data: Dict[str, Any], file_path: str) -> bool:
        """
        Save data to JSON file
        """
        try:
            Utils.ensure_dir(os.path.dirname(file_path))
            with open(file_path, 'w') as f:
                json.dump(data, f, indent=4, sort_keys=True)
            return True
        except Exception as e:
            Logger().error(f"Error saving JSON file: {str(e)}")
            raise

    @staticmethod
    def ensure_dir(directory: str) -> None:
        """
        Ensure directory exists
        """
        if not directory:
            return
        try:
            if not os.path.exists(directory):
                os.makedirs(directory)
        except Exception as e:
            Logger().error(f"Error creating directory: {str(e)}")
            raise

    @staticmethod
    def frame_to_csv(
        frame: pd.DataFrame,
        columns: List[str],
        file_path: Optional[str] = None,
        digits: int = Constants.FLOAT_DIGITS,
    ) -> str:
        """
        Render a table with a fixed column order and float format.

        Returns the CSV text; also writes it when `file_path` is given.
        """
        text = frame.reindex(columns=columns).to_csv(
            index=False,
            float_format=Utils.float_format(digits),
            lineterminator='\n',
        )
        if file_path:
            Utils.ensure_dir(os.path.dirname(file_path))
            with open(file_path, 'w') as f:
                f.write(text)
            Logger().info(f"Wrote {len(frame)} rows to {file_path}")
        return text
