// ssleval/ssleval.hpp

// Copyright 2026  ssleval authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#define SSLEVAL_VERSION "1.0.0"

#include "ssleval/annotation.hpp"
#include "ssleval/assignment.hpp"
#include "ssleval/audio.hpp"
#include "ssleval/der.hpp"
#include "ssleval/diarize.hpp"
#include "ssleval/error.hpp"
#include "ssleval/features.hpp"
#include "ssleval/fusion.hpp"
#include "ssleval/io/rttm.hpp"
#include "ssleval/io/sslf.hpp"
#include "ssleval/io/wav.hpp"
#include "ssleval/matrix.hpp"
#include "ssleval/powerset.hpp"
#include "ssleval/resampler.hpp"
#include "ssleval/separation_metrics.hpp"
#include "ssleval/tasnet.hpp"
