// SPDX-License-Identifier: Apache-2.0
//
// rrtx: channel orthogonalization for panel-based large intelligent surfaces
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef RRTX_RRTX_HPP
#define RRTX_RRTX_HPP

#include "rrtx/baseline.hpp"
#include "rrtx/channel.hpp"
#include "rrtx/common.hpp"
#include "rrtx/isi.hpp"
#include "rrtx/ortho.hpp"
#include "rrtx/powmin.hpp"
#include "rrtx/random.hpp"

#endif
