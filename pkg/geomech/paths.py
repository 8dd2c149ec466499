from pathlib import Path

ROOT = Path(__file__).parent.parent.resolve()

CONFIG_DIR = ROOT / "configs" / "configs_cli"
MODEL_FILES_DIR = ROOT / "model_files"
OUTPUT_FOLDER = ROOT / "project_folder" / "geomech"
