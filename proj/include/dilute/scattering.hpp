// Copyright 2026 The dilute Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "dilute/scattering/cutoff.hpp"
#include "dilute/scattering/fourier.hpp"
#include "dilute/scattering/neumann.hpp"
