//! Shared inputs for the benchmarks.

pub const WATER_TANK_ST: &str = include_str!("../../../corpus/water_tank.st");
pub const WATER_TANK_MODEL: &str = include_str!("../../../corpus/water_tank.dlhp");
pub const SAFE_MODEL: &str = include_str!("../../../corpus/water_tank_safe.dlhp");
pub const SAFE_CTRL: &str = include_str!("../../../corpus/water_tank_safe_ctrl.st");
