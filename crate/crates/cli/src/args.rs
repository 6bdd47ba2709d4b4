//! Flag parsing and translation into a simulation config.

use clap::{ArgGroup, Parser};

use multiway_core::channel::{
    elevation_angle_deg, los_probability, AntennaConfig, Environment, Geometry,
};
use multiway_core::schemes::Scheme;
use multiway_core::simulate::SimConfig;
use multiway_core::{Error, Result};

/// Analytic sum-rate sweeps for a three-node MIMO multi-way channel with an
/// intermittently available aerial node.
#[derive(Parser, Debug)]
#[command(
    name = "multiway",
    version,
    group(ArgGroup::new("availability").required(true).args(["tau", "env"]))
)]
pub struct Cli {
    /// Antenna counts "M1,M2,M3" (aerial node first, non-increasing).
    #[arg(long, value_name = "M1,M2,M3", default_value = "5,3,2", value_parser = parse_antennas)]
    pub antennas: AntennaConfig,

    /// Availability probabilities of the aerial node, comma separated.
    #[arg(long, value_delimiter = ',', value_name = "LIST")]
    pub tau: Vec<f64>,

    /// Resolve tau from propagation environments instead (needs --altitude
    /// and --distance). Tokens: suburban, urban, dense-urban, urban-high-rise.
    #[arg(long, value_delimiter = ',', value_name = "LIST")]
    pub env: Vec<Environment>,

    /// Aerial node altitude in metres (with --env).
    #[arg(long, value_name = "METRES")]
    pub altitude: Option<f64>,

    /// Ground distance to the aerial node in metres (with --env).
    #[arg(long, value_name = "METRES")]
    pub distance: Option<f64>,

    /// SNR grid in dB: either one value or "start:stop:step".
    #[arg(long, default_value = "0:60:5", value_name = "A:B:C", value_parser = parse_snr_grid)]
    pub snr: SnrGrid,

    /// Channel realisations per grid point.
    #[arg(long, default_value_t = 200)]
    pub trials: usize,

    /// Seed for all random substreams.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Schemes to evaluate, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2w,bc,blind-bc,iazf,p2p-tin", value_name = "LIST")]
    pub schemes: Vec<Scheme>,

    /// Output CSV path; without it the CSV streams to standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<std::path::PathBuf>,

    /// Worker threads for the trial loop; 0 picks the machine default.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Clone)]
pub struct SnrGrid(pub Vec<f64>);

fn parse_antennas(s: &str) -> std::result::Result<AntennaConfig, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three antenna counts, got \"{s}\""));
    }
    let mut m = [0usize; 3];
    for (dst, part) in m.iter_mut().zip(&parts) {
        *dst = part.trim().parse().map_err(|e| format!("bad antenna count \"{part}\": {e}"))?;
    }
    AntennaConfig::new(m[0], m[1], m[2]).map_err(|e| e.to_string())
}

/// Grid points against accidental giant sweeps.
const MAX_SNR_POINTS: usize = 4096;

fn parse_snr_grid(s: &str) -> std::result::Result<SnrGrid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let snrs = match parts.as_slice() {
        [one] => {
            vec![one.trim().parse::<f64>().map_err(|e| format!("bad SNR \"{one}\": {e}"))?]
        }
        [a, b, c] => {
            let start: f64 = a.trim().parse().map_err(|e| format!("bad SNR start \"{a}\": {e}"))?;
            let stop: f64 = b.trim().parse().map_err(|e| format!("bad SNR stop \"{b}\": {e}"))?;
            let step: f64 = c.trim().parse().map_err(|e| format!("bad SNR step \"{c}\": {e}"))?;
            if !start.is_finite() || !stop.is_finite() || !step.is_finite() {
                return Err(format!("SNR grid \"{s}\" has non-finite endpoints"));
            }
            if step <= 0.0 {
                return Err(format!("SNR step must be positive, got {step}"));
            }
            if stop < start {
                return Err(format!("SNR stop {stop} lies below start {start}"));
            }
            // A little slack so e.g. 0:60:5 includes 60 despite rounding.
            let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
            if n > MAX_SNR_POINTS {
                return Err(format!("SNR grid would have {n} points (limit {MAX_SNR_POINTS})"));
            }
            (0..n).map(|i| start + step * i as f64).collect()
        }
        _ => return Err(format!("expected \"value\" or \"start:stop:step\", got \"{s}\"")),
    };
    for &x in &snrs {
        if !x.is_finite() {
            return Err(format!("SNR grid \"{s}\" contains a non-finite point"));
        }
    }
    Ok(SnrGrid(snrs))
}

/// How each tau in the sweep came to be: given directly or resolved from an
/// environment and geometry.
#[derive(Debug, Clone)]
pub struct TauSource {
    pub tau: f64,
    pub env: Option<(Environment, f64)>,
}

pub fn build_sim_config(cli: &Cli) -> Result<(SimConfig, Vec<TauSource>)> {
    let sources = if cli.env.is_empty() {
        if cli.altitude.is_some() || cli.distance.is_some() {
            return Err(Error::Config(
                "--altitude and --distance are only meaningful with --env".into(),
            ));
        }
        cli.tau.iter().map(|&tau| TauSource { tau, env: None }).collect::<Vec<_>>()
    } else {
        let (altitude, distance) = match (cli.altitude, cli.distance) {
            (Some(a), Some(d)) => (a, d),
            _ => {
                return Err(Error::Config(
                    "--env needs both --altitude and --distance".into(),
                ))
            }
        };
        let geom = Geometry::new(altitude, distance)?;
        let angle = elevation_angle_deg(geom);
        cli.env
            .iter()
            .map(|&env| {
                Ok(TauSource { tau: los_probability(env, angle)?, env: Some((env, angle)) })
            })
            .collect::<Result<Vec<_>>>()?
    };
    let sc = SimConfig {
        cfg: cli.antennas,
        taus: sources.iter().map(|s| s.tau).collect(),
        snrs_db: cli.snr.0.clone(),
        trials: cli.trials,
        seed: cli.seed,
        schemes: cli.schemes.clone(),
    };
    sc.validate()?;
    Ok((sc, sources))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antenna_parser_checks_shape_and_order() {
        assert_eq!(parse_antennas("5,3,2").unwrap().as_array(), [5, 3, 2]);
        assert!(parse_antennas("5,3").is_err());
        assert!(parse_antennas("5,x,2").is_err());
        assert!(parse_antennas("2,3,5").is_err());
        assert!(parse_antennas("5,3,0").is_err());
    }

    #[test]
    fn snr_parser_expands_ranges() {
        assert_eq!(parse_snr_grid("30").unwrap().0, vec![30.0]);
        let grid = parse_snr_grid("0:60:5").unwrap().0;
        assert_eq!(grid.len(), 13);
        assert_eq!(grid[0], 0.0);
        assert_eq!(grid[12], 60.0);
        assert_eq!(parse_snr_grid("40:60:5").unwrap().0, vec![40.0, 45.0, 50.0, 55.0, 60.0]);
        assert!(parse_snr_grid("0:60:0").is_err());
        assert!(parse_snr_grid("60:0:5").is_err());
        assert!(parse_snr_grid("1:2:3:4").is_err());
        assert!(parse_snr_grid("abc").is_err());
    }

    #[test]
    fn tau_and_env_sources_resolve() {
        let cli = Cli::try_parse_from([
            "multiway", "--tau", "0.1,0.7", "--trials", "1", "--snr", "30",
        ])
        .unwrap();
        let (sc, src) = build_sim_config(&cli).unwrap();
        assert_eq!(sc.taus, vec![0.1, 0.7]);
        assert!(src.iter().all(|s| s.env.is_none()));

        let cli = Cli::try_parse_from([
            "multiway", "--env", "urban", "--altitude", "609", "--distance", "1000",
        ])
        .unwrap();
        let (sc, src) = build_sim_config(&cli).unwrap();
        let geom = Geometry::new(609.0, 1000.0).unwrap();
        let want = multiway_core::channel::tau_from_environment(Environment::Urban, geom).unwrap();
        assert_eq!(sc.taus, vec![want]);
        assert_eq!(src[0].env.unwrap().0, Environment::Urban);
    }

    #[test]
    fn conflicting_or_missing_tau_sources_fail() {
        assert!(Cli::try_parse_from(["multiway", "--tau", "0.5", "--env", "urban"]).is_err());
        assert!(Cli::try_parse_from(["multiway"]).is_err());
        // Geometry without --env parses (clap cannot see through the group)
        // but is rejected when the config is built.
        let cli = Cli::try_parse_from(["multiway", "--altitude", "5", "--tau", "0.5"]).unwrap();
        assert!(matches!(build_sim_config(&cli), Err(Error::Config(_))));
        let cli = Cli::try_parse_from(["multiway", "--env", "urban", "--altitude", "5"]).unwrap();
        assert!(matches!(build_sim_config(&cli), Err(Error::Config(_))));
    }

    #[test]
    fn out_of_range_tau_is_a_config_error() {
        let cli = Cli::try_parse_from(["multiway", "--tau", "1.5"]).unwrap();
        assert!(matches!(build_sim_config(&cli), Err(Error::Config(_))));
    }

    #[test]
    fn defaults_reproduce_the_reference_grid() {
        let cli = Cli::try_parse_from(["multiway", "--tau", "0.7"]).unwrap();
        let (sc, _) = build_sim_config(&cli).unwrap();
        assert_eq!(sc.cfg.as_array(), [5, 3, 2]);
        assert_eq!(sc.snrs_db.len(), 13);
        assert_eq!(sc.trials, 200);
        assert_eq!(sc.schemes.len(), 5);
    }
}
