// Copyright 2026 The qlhl Authors
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

#include "qlhl/bits.hpp"
#include "qlhl/bootstrap.hpp"
#include "qlhl/bounds.hpp"
#include "qlhl/combiner.hpp"
#include "qlhl/entropy.hpp"
#include "qlhl/error.hpp"
#include "qlhl/extractor.hpp"
#include "qlhl/fraction.hpp"
#include "qlhl/handshake.hpp"
#include "qlhl/its_mac.hpp"
#include "qlhl/kv.hpp"
#include "qlhl/providers.hpp"
#include "qlhl/schedule.hpp"
#include "qlhl/wire.hpp"
