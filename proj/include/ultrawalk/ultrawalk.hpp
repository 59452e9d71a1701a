// Copyright 2026 The ultrawalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "ultrawalk/classical_walk.hpp"
#include "ultrawalk/dense.hpp"
#include "ultrawalk/errors.hpp"
#include "ultrawalk/hamiltonian.hpp"
#include "ultrawalk/quadrature.hpp"
#include "ultrawalk/quantum_walk.hpp"
#include "ultrawalk/rational.hpp"
#include "ultrawalk/reference_graphs.hpp"
#include "ultrawalk/ultrametric_space.hpp"
