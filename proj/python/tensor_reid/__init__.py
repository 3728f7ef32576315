# Copyright 2026 The tensor-reid Authors
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

"""Tensor cross-view quadratic discriminant analysis for person re-identification."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import _run_protocol_json

__version__ = "0.1.0"


def run_protocol(descriptors, part_width, p_out, d_out, **kwargs):
    """Run the cross-validation protocol and return the report as a dict.

    ``descriptors`` maps a descriptor name to a ``(view_a, view_b)`` pair of
    FeatureSet objects.
    """
    return _json.loads(_run_protocol_json(descriptors, part_width, p_out, d_out, **kwargs))
