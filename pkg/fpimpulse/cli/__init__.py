# Command-line front end: JSON configuration, command dispatch, SVG plots.

from .plots import render_plots
from .run_config import RunConfig, dump_config, load_config
from .runner import run
