# Copyright 2026 The invsim Authors
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

"""Reset/step environment over the native inventory simulator."""

import json

from ._core import Env, InvsimError, engine_version, registry_hash, task_names

__all__ = ["Env", "InvsimError", "make", "manifest", "engine_version", "registry_hash", "task_names"]


def make(task, split="test", seed=0):
    """One agent per (warehouse, SKU); actions index the multiplier list."""
    return Env(task, split, seed)


def manifest(env):
    return json.loads(env.manifest())
