// Copyright 2026 The orbitlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "orbitlab/cli.hpp"
#include "orbitlab/dynamics.hpp"
#include "orbitlab/expr.hpp"
#include "orbitlab/fields.hpp"
#include "orbitlab/galois_wreath.hpp"
#include "orbitlab/ks_geometry.hpp"
#include "orbitlab/reports.hpp"
#include "orbitlab/zsigmondy.hpp"
