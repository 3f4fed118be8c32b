// Copyright 2026 The EBS Simulator Authors
// SPDX-License-Identifier: Apache-2.0

/// Nine significant digits in scientific notation; negative zero prints as
/// zero.
pub fn sci(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.8e}")
}
