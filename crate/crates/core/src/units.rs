//! dB conversions and the thermal noise floor.

/// Thermal noise spectral density at the reference temperature, -174 dBm/Hz.
pub const KT_REF: f64 = 3.981_071_705_534_972e-21;

/// Reference temperature in Kelvin.
pub const T_REF: f64 = 290.0;

pub fn db_to_lin(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn lin_to_db(lin: f64) -> f64 {
    10.0 * lin.log10()
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    1e-3 * db_to_lin(dbm)
}

pub fn watts_to_dbm(w: f64) -> f64 {
    lin_to_db(w / 1e-3)
}

/// kT in Joules at the given temperature, scaled from -174 dBm/Hz at 290 K.
pub fn kt(temperature_k: f64) -> f64 {
    KT_REF * temperature_k / T_REF
}
