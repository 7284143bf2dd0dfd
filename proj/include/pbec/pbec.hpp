/**************************************************************************
 * pbec.hpp
 *
 * Copyright 2026 The pbec authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 **************************************************************************/

#pragma once

#include "analysis.hpp"
#include "errors.hpp"
#include "framework.hpp"
#include "genpb.hpp"
#include "gf256.hpp"
#include "mds.hpp"
#include "rational.hpp"
#include "rsr2.hpp"
#include "simnode.hpp"
