//! Run configuration: defaults, then `key = value` config file, then flags.
//!
//! Every key has a `--key` flag of the same name. Unknown keys in a config
//! file are rejected.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chronon_core::dynamics::{PacketMode, Spinor};
use chronon_core::grid::GridSpec1D;
use chronon_core::{Complex64, PhysicalParams};
use clap::{Arg, ArgAction, ArgMatches};

use crate::RunError;

pub const OUTPUT_DIR_ENV: &str = "CHRONON_OUTPUT_DIR";
pub const DEFAULT_OUTPUT_DIR: &str = "chronon-output";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    VerifyAlgebra,
    Snyder,
    Zitterbewegung,
    Averaging,
    All,
}

impl Command {
    pub const ALL: [Command; 5] = [
        Command::VerifyAlgebra,
        Command::Snyder,
        Command::Zitterbewegung,
        Command::Averaging,
        Command::All,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::VerifyAlgebra => "verify-algebra",
            Command::Snyder => "snyder",
            Command::Zitterbewegung => "zitterbewegung",
            Command::Averaging => "averaging",
            Command::All => "all",
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command `{s}`"))
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// (key, help) for every configurable value, in manifest order.
pub const KEYS: &[(&str, &str)] = &[
    ("hbar", "reduced Planck constant [default 1]"),
    ("c", "speed of light [default 1]"),
    ("mass", "particle mass [default 1]"),
    ("a", "fundamental length [default: Compton wavelength hbar/(mass c)]"),
    ("n", "1-D Snyder grid points, power of two [default 1024]"),
    ("p-max", "1-D Snyder grid half-width [default 20]"),
    ("n-2d", "2-D Snyder grid points per axis [default 256]"),
    ("p-max-2d", "2-D Snyder grid half-width [default 12]"),
    ("packet-n", "wave-packet momentum grid points [default 4096]"),
    ("packet-p-max", "wave-packet momentum grid half-width [default 20]"),
    ("p0", "packet center momentum [default 0]"),
    ("sigma-p", "packet momentum width [default 0.1]"),
    ("mode", "packet energy content: mixed|positive|negative [default mixed]"),
    ("spinor-seed", "four spinor weights, each `re` or `re:im` [default 1,0,1,0]"),
    ("t-max", "simulated time span [default 50]"),
    ("n-samples", "samples in the position series [default 4096]"),
    ("window", "averaging window [default: Compton time hbar/(mass c^2)]"),
    ("output-dir", "output directory [default $CHRONON_OUTPUT_DIR or chronon-output]"),
    ("plots", "write SVG plots: true|false [default true]"),
    ("seed", "seed for random momenta [default 42]"),
    ("momenta", "random momenta in the covariance check [default 100]"),
];

#[derive(Clone, Debug, PartialEq)]
pub struct PacketConfig {
    pub p0: f64,
    pub sigma_p: f64,
    pub mode: PacketMode,
    pub spinor_seed: Spinor,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TimeConfig {
    pub t_max: f64,
    pub n_samples: usize,
    pub window: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub params: PhysicalParams,
    pub grid: GridSpec1D,
    pub grid_2d: GridSpec1D,
    pub packet_grid: GridSpec1D,
    pub packet: PacketConfig,
    pub time: TimeConfig,
    pub output_dir: PathBuf,
    pub emit_plots: bool,
    pub seed: u64,
    pub momenta: usize,
}

fn cli() -> clap::Command {
    let mut cmd = clap::Command::new("chronon")
        .about("Quantized-spacetime commutator checks and Dirac Zitterbewegung experiments")
        .arg(
            Arg::new("command")
                .value_name("COMMAND")
                .help("verify-algebra | snyder | zitterbewegung | averaging | all")
                .value_parser(Command::ALL.map(|c| c.name())),
        )
        .arg(
            Arg::new("config")
                .long("config")
                .value_name("PATH")
                .help("flat `key = value` config file"),
        );
    for (key, help) in KEYS {
        cmd = cmd.arg(
            Arg::new(*key)
                .long(*key)
                .value_name("VALUE")
                .help(*help)
                .allow_negative_numbers(true)
                .action(ArgAction::Set),
        );
    }
    cmd
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>, RunError> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            RunError::Config(format!("config line {}: expected `key = value`", lineno + 1))
        })?;
        let (k, v) = (k.trim(), v.trim());
        if k != "command" && !KEYS.iter().any(|(key, _)| *key == k) {
            return Err(RunError::Config(format!(
                "config line {}: unknown key `{k}`",
                lineno + 1
            )));
        }
        out.insert(k.to_string(), v.to_string());
    }
    Ok(out)
}

/// Builds a [`RunConfig`] from command-line tokens (without the program
/// name). `env_output_dir` is the value of `CHRONON_OUTPUT_DIR`, if set.
pub fn parse_config<I, S>(args: I, env_output_dir: Option<&str>) -> Result<RunConfig, RunError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("chronon")).chain(args.into_iter().map(Into::into));
    let matches = cli().try_get_matches_from(argv).map_err(RunError::Usage)?;
    let mut merged = match matches.get_one::<String>("config") {
        Some(path) => load_config_file(Path::new(path))?,
        None => BTreeMap::new(),
    };
    merge_flags(&matches, &mut merged);
    if let Some(cmd) = matches.get_one::<String>("command") {
        merged.insert("command".into(), cmd.clone());
    }
    if !merged.contains_key("output-dir") {
        if let Some(dir) = env_output_dir.filter(|d| !d.is_empty()) {
            merged.insert("output-dir".into(), dir.to_string());
        }
    }
    resolve(merged)
}

fn load_config_file(path: &Path) -> Result<BTreeMap<String, String>, RunError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| RunError::Config(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_file(&text)
}

fn merge_flags(matches: &ArgMatches, merged: &mut BTreeMap<String, String>) {
    for (key, _) in KEYS {
        if let Some(v) = matches.get_one::<String>(key) {
            merged.insert((*key).to_string(), v.clone());
        }
    }
}

struct Values<'a>(&'a BTreeMap<String, String>);

impl Values<'_> {
    fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T, RunError> {
        match self.0.get(key) {
            None => Ok(default),
            Some(raw) => raw
                .parse()
                .map_err(|_| RunError::Config(format!("malformed value for `{key}`: `{raw}`"))),
        }
    }

    fn positive(&self, key: &str, default: f64) -> Result<f64, RunError> {
        let v: f64 = self.get(key, default)?;
        if !(v.is_finite() && v > 0.0) {
            return Err(RunError::Config(format!("`{key}` must be > 0, got {v}")));
        }
        Ok(v)
    }
}

fn grid(n: usize, p_max: f64, what: &str) -> Result<GridSpec1D, RunError> {
    GridSpec1D::new(n, p_max).map_err(|e| RunError::Config(format!("{what}: {e}")))
}

pub fn parse_spinor(raw: &str) -> Result<Spinor, String> {
    let parts: Vec<&str> = raw.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(format!("spinor needs 4 comma-separated weights, got {}", parts.len()));
    }
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for (slot, part) in out.iter_mut().zip(&parts) {
        let (re, im) = match part.split_once(':') {
            Some((r, i)) => (r.trim(), i.trim()),
            None => (*part, "0"),
        };
        let re: f64 = re.parse().map_err(|_| format!("bad spinor weight `{part}`"))?;
        let im: f64 = im.parse().map_err(|_| format!("bad spinor weight `{part}`"))?;
        if !(re.is_finite() && im.is_finite()) {
            return Err(format!("non-finite spinor weight `{part}`"));
        }
        *slot = Complex64::new(re, im);
    }
    Ok(out)
}

fn resolve(merged: BTreeMap<String, String>) -> Result<RunConfig, RunError> {
    let v = Values(&merged);
    let command: Command = match merged.get("command") {
        Some(c) => c.parse().map_err(RunError::Config)?,
        None => return Err(RunError::Config("missing command".into())),
    };
    let hbar = v.positive("hbar", 1.0)?;
    let c = v.positive("c", 1.0)?;
    let m = v.positive("mass", 1.0)?;
    let a: f64 = v.get("a", hbar / (m * c))?;
    let params = PhysicalParams::new(hbar, c, m, a).map_err(|e| RunError::Config(e.to_string()))?;

    let grid_1d = grid(v.get("n", 1024)?, v.positive("p-max", 20.0)?, "1-D grid")?;
    let grid_2d = grid(v.get("n-2d", 256)?, v.positive("p-max-2d", 12.0)?, "2-D grid")?;
    let packet_grid = grid(v.get("packet-n", 4096)?, v.positive("packet-p-max", 20.0)?, "packet grid")?;

    let mode: PacketMode = match merged.get("mode") {
        Some(raw) => raw.parse().map_err(RunError::Config)?,
        None => PacketMode::Mixed,
    };
    let spinor_seed = parse_spinor(merged.get("spinor-seed").map(String::as_str).unwrap_or("1,0,1,0"))
        .map_err(RunError::Config)?;
    let p0: f64 = v.get("p0", 0.0)?;
    if !p0.is_finite() {
        return Err(RunError::Config("`p0` must be finite".into()));
    }
    let packet = PacketConfig {
        p0,
        sigma_p: v.positive("sigma-p", 0.1)?,
        mode,
        spinor_seed,
    };

    let n_samples: usize = v.get("n-samples", 4096)?;
    if n_samples < 2 {
        return Err(RunError::Config("`n-samples` must be at least 2".into()));
    }
    let time = TimeConfig {
        t_max: v.positive("t-max", 50.0)?,
        n_samples,
        window: v.positive("window", params.compton_time())?,
    };

    let output_dir = PathBuf::from(
        merged
            .get("output-dir")
            .cloned()
            .unwrap_or_else(|| DEFAULT_OUTPUT_DIR.to_string()),
    );
    let emit_plots: bool = v.get("plots", true)?;
    let seed: u64 = v.get("seed", 42)?;
    let momenta: usize = v.get("momenta", 100)?;

    Ok(RunConfig {
        command,
        params,
        grid: grid_1d,
        grid_2d,
        packet_grid,
        packet,
        time,
        output_dir,
        emit_plots,
        seed,
        momenta,
    })
}

impl RunConfig {
    /// Manifest text; it is itself a valid config file.
    pub fn manifest(&self, outputs: &[String]) -> String {
        let mut s = String::new();
        s.push_str("# chronon run manifest; pass back with --config to reproduce\n");
        s.push_str(&format!("command = {}\n", self.command));
        let effective = self.effective_values();
        for (key, _) in KEYS {
            if let Some(val) = effective.get(*key) {
                s.push_str(&format!("{key} = {val}\n"));
            }
        }
        s.push_str("# outputs:\n");
        for o in outputs {
            s.push_str(&format!("#   {o}\n"));
        }
        s
    }

    /// Every key with the value in effect, written so it parses back to the
    /// same number.
    pub fn effective_values(&self) -> BTreeMap<String, String> {
        let seed = self
            .packet
            .spinor_seed
            .iter()
            .map(|z| format!("{:?}:{:?}", z.re, z.im))
            .collect::<Vec<_>>()
            .join(",");
        let p = &self.params;
        [
            ("hbar", format!("{:?}", p.hbar)),
            ("c", format!("{:?}", p.c)),
            ("mass", format!("{:?}", p.m)),
            ("a", format!("{:?}", p.a)),
            ("n", self.grid.n().to_string()),
            ("p-max", format!("{:?}", self.grid.p_max())),
            ("n-2d", self.grid_2d.n().to_string()),
            ("p-max-2d", format!("{:?}", self.grid_2d.p_max())),
            ("packet-n", self.packet_grid.n().to_string()),
            ("packet-p-max", format!("{:?}", self.packet_grid.p_max())),
            ("p0", format!("{:?}", self.packet.p0)),
            ("sigma-p", format!("{:?}", self.packet.sigma_p)),
            ("mode", self.packet.mode.to_string()),
            ("spinor-seed", seed),
            ("t-max", format!("{:?}", self.time.t_max)),
            ("n-samples", self.time.n_samples.to_string()),
            ("window", format!("{:?}", self.time.window)),
            ("output-dir", self.output_dir.display().to_string()),
            ("plots", self.emit_plots.to_string()),
            ("seed", self.seed.to_string()),
            ("momenta", self.momenta.to_string()),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<RunConfig, RunError> {
        parse_config(args.iter().copied(), None)
    }

    #[test]
    fn defaults() {
        let cfg = parse(&["verify-algebra"]).unwrap();
        assert_eq!(cfg.command, Command::VerifyAlgebra);
        assert_eq!(cfg.params, PhysicalParams::natural());
        assert_eq!(cfg.grid.n(), 1024);
        assert_eq!(cfg.seed, 42);
        assert_eq!(cfg.output_dir, PathBuf::from(DEFAULT_OUTPUT_DIR));
    }

    #[test]
    fn mass_flag_sets_compton_length() {
        let cfg = parse(&["zitterbewegung", "--mass", "2"]).unwrap();
        assert_eq!(cfg.params.m, 2.0);
        assert_eq!(cfg.params.a, 0.5);
        assert_eq!(cfg.time.window, 0.5);
    }

    #[test]
    fn negative_mass_rejected() {
        assert!(matches!(parse(&["zitterbewegung", "--mass", "-1"]), Err(RunError::Config(_))));
    }

    #[test]
    fn usage_errors() {
        assert!(matches!(parse(&["snyder", "--bogus", "1"]), Err(RunError::Usage(_))));
        assert!(matches!(parse(&["snyder", "--mass", "heavy"]), Err(RunError::Config(_))));
        assert!(matches!(parse(&[]), Err(RunError::Config(_))));
        assert!(matches!(parse(&["dance"]), Err(RunError::Usage(_))));
    }

    #[test]
    fn flags_override_file_override_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(&path, "# test\nmass = 3\nseed = 7 # trailing\nwindow=0.25\n").unwrap();
        let cfg = parse(&["averaging", "--config", path.to_str().unwrap(), "--seed", "9"]).unwrap();
        assert_eq!(cfg.params.m, 3.0);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.time.window, 0.25);
    }

    #[test]
    fn unknown_file_key_rejected() {
        assert!(parse_config_file("mass = 1\nflavour = up\n").is_err());
        assert!(parse_config_file("no equals sign").is_err());
    }

    #[test]
    fn env_output_dir_is_lowest_priority_override() {
        let cfg = parse_config(["snyder"], Some("/tmp/from-env")).unwrap();
        assert_eq!(cfg.output_dir, PathBuf::from("/tmp/from-env"));
        let cfg = parse_config(["snyder", "--output-dir", "/tmp/flag"], Some("/tmp/from-env")).unwrap();
        assert_eq!(cfg.output_dir, PathBuf::from("/tmp/flag"));
    }

    #[test]
    fn spinor_parsing() {
        let s = parse_spinor("1, 0:-2, 0.5,0").unwrap();
        assert_eq!(s[1], Complex64::new(0.0, -2.0));
        assert!(parse_spinor("1,2,3").is_err());
        assert!(parse_spinor("1,2,3,x").is_err());
    }

    #[test]
    fn manifest_round_trips() {
        let cfg = parse(&["all", "--mass", "1.7", "--spinor-seed", "1,0:0.5,1,0", "--seed", "3"]).unwrap();
        let text = cfg.manifest(&["report.txt".into()]);
        let back = resolve(parse_config_file(&text).unwrap()).unwrap();
        assert_eq!(back.params, cfg.params);
        assert_eq!(back.packet, cfg.packet);
        assert_eq!(back.time, cfg.time);
        assert_eq!(back.seed, 3);
        assert_eq!(back.command, Command::All);
    }
}
