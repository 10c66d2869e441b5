# freeboundary/cli/__init__.py
# 2026-10-17
from .config import RunConfig, COMMAND_DEFAULTS, SCHEMA_VERSION, resolve_config, load_config_file
from .artifacts import write_csv, write_json
from .commands import (COMMANDS, cmd_k_profile, cmd_dispersion, cmd_verify_bounds, cmd_mode_response,
    cmd_kernel_check, cmd_norms)
from .main import main, run, parse_args
