/* Copyright 2026 The lmfp Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include "lmfp/attacks.hpp"
#include "lmfp/avalanche.hpp"
#include "lmfp/bench.hpp"
#include "lmfp/bleu.hpp"
#include "lmfp/channel.hpp"
#include "lmfp/dataset.hpp"
#include "lmfp/encoder.hpp"
#include "lmfp/json_io.hpp"
#include "lmfp/keymat.hpp"
#include "lmfp/registry.hpp"
#include "lmfp/registry_server.hpp"
#include "lmfp/remote.hpp"
#include "lmfp/rs_codec.hpp"
#include "lmfp/verifier.hpp"
