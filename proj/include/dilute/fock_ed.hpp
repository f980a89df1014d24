// Copyright 2026 The dilute Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "dilute/fock/diagnostics.hpp"
#include "dilute/fock/field_terms.hpp"
#include "dilute/fock/mode_set.hpp"
#include "dilute/fock/operators.hpp"
#include "dilute/fock/particle_hole.hpp"
#include "dilute/fock/sector.hpp"
#include "dilute/fock/sparse.hpp"
#include "dilute/fock/spectral.hpp"
