# Copyright 2026 The dnull Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Displaced-null measurement estimation for pure-state models."""
import json as _json

from ._core import *  # noqa: F401,F403
from ._core import __version__, run_experiment_json


def run_experiment(config):
    """Run a Monte Carlo experiment.

    ``config`` is a dict (or JSON string) with the same keys as the CLI
    configuration files. Returns the risk report as a dict.
    """
    text = config if isinstance(config, str) else _json.dumps(config)
    return _json.loads(run_experiment_json(text))


__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
