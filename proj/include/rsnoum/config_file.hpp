#pragma once

#include <istream>
#include <string>

#include "rsnoum/experiment.hpp"

namespace rsnoum {

/// Reads an experiment plan from `key = value` lines. `#` starts a comment;
/// lists are comma separated. Unknown keys and malformed values throw
/// std::invalid_argument naming the line. Keys (defaults in parentheses):
///
///   nt_x, nt_y                 antenna grid (6, 6)
///   altitude_km                (600)
///   coverage_radius_km         (120)
///   carrier_freq_ghz           (20)
///   bandwidth_mhz              (10)
///   tx_gain_dbi, rx_gain_dbi   (6, 25)
///   sys_noise_temp_k           (150)
///   noise_var                  (1)
///   tx_power_w                 (50)
///   rician_k_db                (12)
///   demand_uc                  list, one entry per user (0.5,0.5,1,1,1.5,2,2.5,2.5)
///   demand_mc                  (1)
///   eta_mc                     fixed multicast weight (mean(demand_uc)/demand_mc)
///   schemes                    list of gpi, ldm, oum (all three)
///   csit                       list of perfect, statistical (both)
///   realizations               (200)
///   seed                       base seed (1)
///   alpha, alpha_growth, max_escalations, epsilon, t_max
///                              solver settings (1e-2, 10, 3, 1e-4, 1000)
///   init                       deterministic | random (deterministic)
///   angle_unit                 deg | rad for user_* angles (rad)
///   user_azimuth, user_off_nadir
///                              optional fixed users, one entry per user
///   sweep                      none | rician_k | mc_demand (none)
///   sweep_values               list; dB for rician_k, bps/Hz for mc_demand
ExperimentPlan parse_plan(std::istream& in);
ExperimentPlan load_plan(const std::string& path);

/// The plan with every default filled in, in the format parse_plan reads.
std::string format_plan(const ExperimentPlan& plan);

}  // namespace rsnoum
