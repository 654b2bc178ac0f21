/* Copyright 2026 The qchannel Authors. All Rights Reserved.

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

// Everything except the JSON layer (qchannel/serialize.hpp).

#ifndef QCHANNEL_QCHANNEL_HPP_
#define QCHANNEL_QCHANNEL_HPP_

#include "qchannel/dynamics.hpp"
#include "qchannel/errors.hpp"
#include "qchannel/hierarchy.hpp"
#include "qchannel/matfun.hpp"
#include "qchannel/qcqp.hpp"
#include "qchannel/rng.hpp"
#include "qchannel/states.hpp"
#include "qchannel/superop.hpp"

#endif  // QCHANNEL_QCHANNEL_HPP_
