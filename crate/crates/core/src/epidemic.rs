//! SEIR-HDVQ compartment model.
//!
//! The rate equations are evaluated as difference equations with a step of
//! one epoch. Transition counts for the optimizer are drawn uniformly from
//! `[0, round(rate * source)]`, where `rate` is the per-capita coefficient
//! of the corresponding inflow term.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scalar rates of the propagation model. All values are per epoch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EpidemicRates {
    /// Recruitment of susceptibles (π).
    pub pi_recruit: f64,
    /// Environmental decay of the virus (η).
    pub eta_decay: f64,
    /// Hospitalization of infected individuals (α).
    pub alpha_hosp: f64,
    /// Disease-induced death (Γ).
    pub gamma_cap_death: f64,
    /// Contact with infectious individuals (β₁).
    pub beta1_contact_infectious: f64,
    /// Contact with the pathogen reservoir (β₂).
    pub beta2_contact_pathogen: f64,
    /// Contact with deceased individuals (β₃).
    pub beta3_contact_deceased: f64,
    /// Contact with recovered individuals (β₄).
    pub beta4_contact_recovered: f64,
    /// Recovery (γ).
    pub gamma_recover: f64,
    /// Natural death (τ).
    pub tau_natural_death: f64,
    /// Burial of the deceased (δ).
    pub delta_burial: f64,
    /// Vaccination (ϑ).
    pub vartheta_vaccinate: f64,
    /// Response to hospital treatment (ω).
    pub omega_hospital_response: f64,
    /// Response to vaccination (μ).
    pub mu_vaccine_response: f64,
    /// Quarantine of infected individuals (ξ).
    pub xi_quarantine: f64,
}

impl Default for EpidemicRates {
    fn default() -> Self {
        Self {
            pi_recruit: 0.05,
            eta_decay: 0.1,
            alpha_hosp: 0.1,
            gamma_cap_death: 0.5,
            beta1_contact_infectious: 0.1,
            beta2_contact_pathogen: 0.1,
            beta3_contact_deceased: 0.1,
            beta4_contact_recovered: 0.1,
            gamma_recover: 0.1,
            tau_natural_death: 0.05,
            delta_burial: 0.1,
            vartheta_vaccinate: 0.1,
            omega_hospital_response: 0.1,
            mu_vaccine_response: 0.1,
            xi_quarantine: 0.1,
        }
    }
}

impl EpidemicRates {
    /// Every rate set to zero.
    pub fn zero() -> Self {
        Self {
            pi_recruit: 0.0,
            eta_decay: 0.0,
            alpha_hosp: 0.0,
            gamma_cap_death: 0.0,
            beta1_contact_infectious: 0.0,
            beta2_contact_pathogen: 0.0,
            beta3_contact_deceased: 0.0,
            beta4_contact_recovered: 0.0,
            gamma_recover: 0.0,
            tau_natural_death: 0.0,
            delta_burial: 0.0,
            vartheta_vaccinate: 0.0,
            omega_hospital_response: 0.0,
            mu_vaccine_response: 0.0,
            xi_quarantine: 0.0,
        }
    }

    fn named(&self) -> [(&'static str, f64); 15] {
        [
            ("pi_recruit", self.pi_recruit),
            ("eta_decay", self.eta_decay),
            ("alpha_hosp", self.alpha_hosp),
            ("gamma_cap_death", self.gamma_cap_death),
            ("beta1_contact_infectious", self.beta1_contact_infectious),
            ("beta2_contact_pathogen", self.beta2_contact_pathogen),
            ("beta3_contact_deceased", self.beta3_contact_deceased),
            ("beta4_contact_recovered", self.beta4_contact_recovered),
            ("gamma_recover", self.gamma_recover),
            ("tau_natural_death", self.tau_natural_death),
            ("delta_burial", self.delta_burial),
            ("vartheta_vaccinate", self.vartheta_vaccinate),
            ("omega_hospital_response", self.omega_hospital_response),
            ("mu_vaccine_response", self.mu_vaccine_response),
            ("xi_quarantine", self.xi_quarantine),
        ]
    }

    /// Hard validity: finite, non-negative, and per-capita flow rates at most 1.
    ///
    /// Zero rates are accepted so that flows can be switched off.
    pub fn validate(&self) -> Result<()> {
        for (name, v) in self.named() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "rate {name} must be finite and non-negative, got {v}"
                )));
            }
        }
        let per_capita = [
            ("alpha_hosp", self.alpha_hosp),
            ("gamma_cap_death", self.gamma_cap_death),
            ("gamma_recover", self.gamma_recover),
            ("tau_natural_death", self.tau_natural_death),
            ("delta_burial", self.delta_burial),
            ("vartheta_vaccinate", self.vartheta_vaccinate),
            ("omega_hospital_response", self.omega_hospital_response),
            ("mu_vaccine_response", self.mu_vaccine_response),
            ("xi_quarantine", self.xi_quarantine),
        ];
        for (name, v) in per_capita {
            if v > 1.0 {
                return Err(Error::InvalidConfig(format!(
                    "rate {name} is a per-epoch fraction and must be <= 1, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Field names accepted by [`EpidemicRates::set`].
    pub fn names() -> Vec<&'static str> {
        Self::zero().named().iter().map(|(n, _)| *n).collect()
    }

    /// Sets one rate by field name or any unambiguous prefix of it
    /// (`xi`, `alpha`, `beta1`, `gamma_r`, ...).
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        let key = name.trim().to_ascii_lowercase();
        let names = Self::names();
        let field = match names.iter().find(|n| **n == key) {
            Some(exact) => *exact,
            None => {
                let hits: Vec<&str> = names
                    .iter()
                    .copied()
                    .filter(|n| !key.is_empty() && n.starts_with(&key))
                    .collect();
                match hits.as_slice() {
                    [one] => *one,
                    [] => return Err(Error::InvalidConfig(format!("unknown rate '{name}'"))),
                    many => {
                        return Err(Error::InvalidConfig(format!(
                            "rate '{name}' is ambiguous: {}",
                            many.join(", ")
                        )))
                    }
                }
            }
        };
        let slot = match field {
            "pi_recruit" => &mut self.pi_recruit,
            "eta_decay" => &mut self.eta_decay,
            "alpha_hosp" => &mut self.alpha_hosp,
            "gamma_cap_death" => &mut self.gamma_cap_death,
            "beta1_contact_infectious" => &mut self.beta1_contact_infectious,
            "beta2_contact_pathogen" => &mut self.beta2_contact_pathogen,
            "beta3_contact_deceased" => &mut self.beta3_contact_deceased,
            "beta4_contact_recovered" => &mut self.beta4_contact_recovered,
            "gamma_recover" => &mut self.gamma_recover,
            "tau_natural_death" => &mut self.tau_natural_death,
            "delta_burial" => &mut self.delta_burial,
            "vartheta_vaccinate" => &mut self.vartheta_vaccinate,
            "omega_hospital_response" => &mut self.omega_hospital_response,
            "mu_vaccine_response" => &mut self.mu_vaccine_response,
            _ => &mut self.xi_quarantine,
        };
        *slot = value;
        Ok(())
    }

    /// Names of rates lying outside the reference ranges
    /// (Γ in [0.4, 0.9], η > 0, the remaining fractions in (0, 1)).
    pub fn outside_reference_ranges(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !(0.4..=0.9).contains(&self.gamma_cap_death) {
            out.push("gamma_cap_death");
        }
        if self.eta_decay <= 0.0 {
            out.push("eta_decay");
        }
        let open_unit = [
            ("alpha_hosp", self.alpha_hosp),
            ("gamma_recover", self.gamma_recover),
            ("tau_natural_death", self.tau_natural_death),
            ("delta_burial", self.delta_burial),
            ("vartheta_vaccinate", self.vartheta_vaccinate),
            ("omega_hospital_response", self.omega_hospital_response),
            ("mu_vaccine_response", self.mu_vaccine_response),
            ("xi_quarantine", self.xi_quarantine),
        ];
        for (name, v) in open_unit {
            if v <= 0.0 || v >= 1.0 {
                out.push(name);
            }
        }
        out
    }
}

/// Compartment sizes at the end of an epoch.
///
/// `s_count` and `i_count` describe membership; the H, R, V, D and Q counts
/// record the transitions of the epoch that produced this census.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CompartmentCensus {
    pub s_count: usize,
    pub i_count: usize,
    pub h_count: usize,
    pub r_count: usize,
    pub v_count: usize,
    pub d_count: usize,
    pub q_count: usize,
    /// Environmental pathogen load (PE).
    pub pe_load: f64,
}

/// Rates of change of each compartment.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CompartmentDerivatives {
    pub ds: f64,
    pub di: f64,
    pub dh: f64,
    pub dr: f64,
    pub dv: f64,
    pub dd: f64,
    pub dq: f64,
}

/// Evaluates the seven compartment rate equations on a census.
///
/// The environmental factor in the infected equation is the decay rate η,
/// and the hospital outflow uses ω.
pub fn compartment_derivatives(
    census: &CompartmentCensus,
    rates: &EpidemicRates,
) -> CompartmentDerivatives {
    let s = census.s_count as f64;
    let i = census.i_count as f64;
    let h = census.h_count as f64;
    let r = census.r_count as f64;
    let v = census.v_count as f64;
    let d = census.d_count as f64;
    let q = census.q_count as f64;
    let pe = census.pe_load;
    let EpidemicRates {
        pi_recruit: pi,
        eta_decay: eta,
        alpha_hosp: alpha,
        gamma_cap_death: big_gamma,
        beta1_contact_infectious: b1,
        beta2_contact_pathogen: b2,
        beta3_contact_deceased: b3,
        beta4_contact_recovered: b4,
        gamma_recover: gamma,
        tau_natural_death: tau,
        delta_burial: delta,
        vartheta_vaccinate: vartheta,
        omega_hospital_response: omega,
        mu_vaccine_response: mu,
        xi_quarantine: xi,
    } = *rates;

    let force = b1 * i + b3 * d + b4 * r + b2 * pe * eta;
    CompartmentDerivatives {
        ds: pi - force * s - (tau * s + big_gamma * i),
        di: force * s - (big_gamma + gamma) * i - tau * s,
        dh: alpha * i - (gamma + omega) * h,
        dr: gamma * i - big_gamma * r,
        dv: gamma * i - (mu + vartheta) * v,
        dd: (tau * s + big_gamma * i) - delta * d,
        dq: (pi * i - (gamma * r + big_gamma * d)) - xi * q,
    }
}

/// Integer transition counts for one epoch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TransitionPlan {
    pub to_quarantine: usize,
    pub to_hospital: usize,
    pub to_recovered: usize,
    pub to_vaccinated: usize,
    pub to_dead: usize,
}

/// Upper bound of a uniform count draw: `round(rate * source)`, clamped to
/// `[0, source]`.
pub fn draw_bound(rate: f64, source: usize) -> usize {
    let raw = (rate * source as f64).round();
    if raw.is_nan() || raw <= 0.0 {
        0
    } else {
        (raw as usize).min(source)
    }
}

/// Uniform integer in `[0, bound]`. Consumes no randomness when `bound == 0`.
pub fn draw_count<R: Rng + ?Sized>(bound: usize, rng: &mut R) -> usize {
    if bound == 0 {
        0
    } else {
        rng.random_range(0..=bound)
    }
}

/// Quarantine draw: `[0, round(ξ · I)]`.
pub fn draw_quarantine<R: Rng + ?Sized>(
    infected: usize,
    rates: &EpidemicRates,
    rng: &mut R,
) -> usize {
    draw_count(draw_bound(rates.xi_quarantine, infected), rng)
}

/// Hospital, recovery, vaccination and death draws from `active` infected.
///
/// Vaccinated individuals are drawn from the hospitalized ones. Hospital,
/// recovery and death draws are capped sequentially so their sum never
/// exceeds `active`. The returned plan has `to_quarantine == 0`.
pub fn draw_removals<R: Rng + ?Sized>(
    active: usize,
    rates: &EpidemicRates,
    rng: &mut R,
) -> TransitionPlan {
    let mut left = active;
    let h = draw_count(draw_bound(rates.alpha_hosp, active), rng).min(left);
    left -= h;
    let r = draw_count(draw_bound(rates.gamma_recover, active), rng).min(left);
    left -= r;
    let v = draw_count(draw_bound(rates.vartheta_vaccinate, h), rng);
    let d = draw_count(draw_bound(rates.gamma_cap_death, active), rng).min(left);
    TransitionPlan {
        to_quarantine: 0,
        to_hospital: h,
        to_recovered: r,
        to_vaccinated: v,
        to_dead: d,
    }
}

/// Draws the full transition plan for a census.
///
/// Quarantine is drawn first from `i_count`; the remaining flows come from
/// the infected that were not quarantined.
pub fn transition_counts<R: Rng + ?Sized>(
    census: &CompartmentCensus,
    rates: &EpidemicRates,
    rng: &mut R,
) -> TransitionPlan {
    let q = draw_quarantine(census.i_count, rates, rng);
    let mut plan = draw_removals(census.i_count - q, rates, rng);
    plan.to_quarantine = q;
    plan
}

impl TransitionPlan {
    /// Applies the plan to a census, moving individuals out of I.
    ///
    /// Recovered, hospitalized and vaccinated return to S; the dead are
    /// replaced by new susceptibles; quarantined stay infected.
    pub fn apply(&self, census: &CompartmentCensus) -> CompartmentCensus {
        let leaving = self.to_hospital + self.to_recovered + self.to_dead;
        let i_count = census.i_count - leaving;
        CompartmentCensus {
            s_count: census.s_count + leaving,
            i_count,
            h_count: self.to_hospital,
            r_count: self.to_recovered,
            v_count: self.to_vaccinated,
            d_count: self.to_dead,
            q_count: self.to_quarantine,
            pe_load: census.pe_load,
        }
    }
}
