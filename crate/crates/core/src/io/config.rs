//! Strict run configuration in TOML with dotted keys.
//!
//! Every key lives in [`KEYS`]; anything else is rejected. Errors name the
//! offending key path.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::evolution::{AdvectionSign, EquationKind, SimConfig, VelocitySpec, DEFAULT_MEMORY_CAP};
use crate::field::ScalarField;
use crate::generate::{cosine_mode, gaussian_bump, random_band_limited, weierstrass};
use crate::grid::GridSpec;
use crate::spaces::{make_test_function, DEFAULT_A};

use super::history::read_history;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KeyType {
    Int,
    Float,
    Bool,
    Str,
    FloatPair,
    IntPair,
}

/// `(key, type, default, meaning)`.
pub const KEYS: &[(&str, KeyType, &str, &str)] = &[
    ("grid.d", KeyType::Int, "required", "dimension, 1 or 2"),
    ("grid.N", KeyType::Int, "required", "nodes per axis, a power of two >= 8"),
    ("equation.kind", KeyType::Str, "drift", "drift | sqg (sqg needs d = 2)"),
    ("equation.sign", KeyType::Str, "paper", "paper: θ_t = (u·∇)θ - Λθ; standard: θ_t = -(u·∇)θ - Λθ"),
    ("equation.alpha", KeyType::Float, "1", "dissipation order in (0, 2]"),
    ("time.T", KeyType::Float, "required", "final time"),
    ("time.dt", KeyType::Float, "auto", "step; auto = 0.25/(|u|_∞ N + πN)"),
    ("velocity.kind", KeyType::Str, "zero", "zero | constant | shear | recorded"),
    ("velocity.constant", KeyType::FloatPair, "[0, 0]", "constant velocity"),
    ("velocity.amplitude", KeyType::Float, "1", "shear u = (0, a sin 2πx₁)"),
    ("velocity.file", KeyType::Str, "none", "torushistory file for recorded velocity"),
    ("initial.kind", KeyType::Str, "random", "zero | constant | cosine | random | gaussian | weierstrass | test_function | file"),
    ("initial.value", KeyType::Float, "0", "constant value"),
    ("initial.mode", KeyType::IntPair, "[1, 0]", "cosine wave vector"),
    ("initial.kmax", KeyType::Int, "4", "random band limit |n|_∞ <= kmax"),
    ("initial.center", KeyType::FloatPair, "[0.5, 0.5]", "gaussian centre"),
    ("initial.sigma", KeyType::Float, "0.05", "gaussian width; mass normalized to 1"),
    ("initial.beta", KeyType::Float, "0.3", "weierstrass exponent"),
    ("initial.levels", KeyType::Int, "all", "weierstrass levels"),
    ("initial.level", KeyType::Int, "4", "test function level j, r = 2^-j"),
    ("initial.file", KeyType::Str, "none", "torusfield snapshot"),
    ("output.cadence", KeyType::Int, "1", "steps between CSV rows"),
    ("output.snapshots", KeyType::Int, "0", "steps between snapshot files; 0 = initial and final only"),
    ("output.history", KeyType::Bool, "false", "write the velocity history file"),
    ("diagnostics.bmo_u", KeyType::Bool, "false", "BMO norm of u at each CSV row"),
    ("diagnostics.beta_hat", KeyType::Bool, "false", "Littlewood-Paley Hölder exponent at each CSV row"),
    ("dual.horizon", KeyType::Float, "time.T", "dual horizon t"),
    ("dual.history", KeyType::Str, "none", "torushistory file; needed unless the velocity is prescribed"),
    ("dual.r", KeyType::Float, "2^-initial.level", "class radius for membership columns"),
    ("dual.A", KeyType::Float, "4", "class constant A > 1"),
    ("dual.cadence", KeyType::Int, "1", "dual steps between CSV rows"),
    ("dual.substeps", KeyType::Int, "1", "dual steps per forward step"),
    ("history.memory_cap_mib", KeyType::Int, "2048", "stored-frame budget before checkpointing"),
    ("seed", KeyType::Int, "0", "seed for random initial data"),
];

/// Key reference for `--help`.
pub fn key_reference() -> String {
    let mut s = String::from("Configuration keys (TOML, dotted):\n");
    for (key, _, default, meaning) in KEYS {
        s.push_str(&format!("  {key:<26} [{default}] {meaning}\n"));
    }
    s
}

#[derive(Clone, Debug, PartialEq)]
pub enum InitialSpec {
    Zero,
    Constant(f64),
    Cosine([i64; 2]),
    Random { kmax: usize },
    Gaussian { center: [f64; 2], sigma: f64 },
    Weierstrass { beta: f64, levels: Option<u32> },
    TestFunction { level: u32 },
    File(PathBuf),
}

impl InitialSpec {
    pub fn build(&self, grid: GridSpec, seed: u64) -> Result<ScalarField> {
        let f = match self {
            InitialSpec::Zero => ScalarField::zeros(grid),
            InitialSpec::Constant(c) => ScalarField::constant(grid, *c),
            InitialSpec::Cosine(n) => cosine_mode(grid, *n),
            InitialSpec::Random { kmax } => random_band_limited(grid, *kmax, seed)?,
            InitialSpec::Gaussian { center, sigma } => gaussian_bump(grid, *center, *sigma)?,
            InitialSpec::Weierstrass { beta, levels } => {
                weierstrass(grid, *beta, levels.unwrap_or_else(|| grid.max_level()))?
            }
            InitialSpec::TestFunction { level } => make_test_function(*level, grid, DEFAULT_A)?.field,
            InitialSpec::File(path) => {
                let f = ScalarField::read_snapshot(path)
                    .map_err(|e| Error::config("initial.file", format!("{}: {e}", path.display())))?;
                if f.grid() != grid {
                    return Err(Error::config("initial.file", "snapshot grid differs from grid.d/grid.N"));
                }
                f
            }
        };
        Ok(f)
    }
}

#[derive(Clone, Debug)]
pub struct DualSpec {
    pub horizon: f64,
    pub history: Option<PathBuf>,
    pub r: Option<f64>,
    pub a: f64,
    pub cadence: usize,
    pub substeps: usize,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub sim: SimConfig,
    pub initial: InitialSpec,
    pub snapshot_every: usize,
    pub write_history: bool,
    pub bmo_u: bool,
    pub beta_hat: bool,
    pub dual: DualSpec,
    pub memory_cap: u64,
    pub seed: u64,
    /// Files the configuration refers to.
    pub inputs: Vec<PathBuf>,
    /// Every key with its effective value, defaults included.
    pub echo: BTreeMap<String, String>,
}

fn flatten(prefix: &str, table: &toml::Table, out: &mut BTreeMap<String, toml::Value>) {
    for (k, v) in table {
        let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        match v {
            toml::Value::Table(t) => flatten(&key, t, out),
            other => {
                out.insert(key, other.clone());
            }
        }
    }
}

struct Reader {
    values: BTreeMap<String, toml::Value>,
    echo: BTreeMap<String, String>,
}

impl Reader {
    fn raw(&self, key: &str) -> Option<&toml::Value> {
        self.values.get(key)
    }

    fn float(&mut self, key: &str) -> Result<Option<f64>> {
        let v = match self.raw(key) {
            None => return Ok(None),
            Some(toml::Value::Float(f)) => *f,
            Some(toml::Value::Integer(i)) => *i as f64,
            Some(_) => return Err(Error::config(key, "expected a number")),
        };
        if !v.is_finite() {
            return Err(Error::config(key, "must be finite"));
        }
        Ok(Some(v))
    }

    fn int(&mut self, key: &str) -> Result<Option<i64>> {
        match self.raw(key) {
            None => Ok(None),
            Some(toml::Value::Integer(i)) => Ok(Some(*i)),
            Some(_) => Err(Error::config(key, "expected an integer")),
        }
    }

    fn count(&mut self, key: &str, min: i64) -> Result<Option<usize>> {
        match self.int(key)? {
            None => Ok(None),
            Some(v) if v < min => Err(Error::config(key, format!("must be >= {min}"))),
            Some(v) => Ok(Some(v as usize)),
        }
    }

    fn boolean(&mut self, key: &str) -> Result<Option<bool>> {
        match self.raw(key) {
            None => Ok(None),
            Some(toml::Value::Boolean(b)) => Ok(Some(*b)),
            Some(_) => Err(Error::config(key, "expected true or false")),
        }
    }

    fn string(&mut self, key: &str) -> Result<Option<String>> {
        match self.raw(key) {
            None => Ok(None),
            Some(toml::Value::String(s)) => Ok(Some(s.clone())),
            Some(_) => Err(Error::config(key, "expected a string")),
        }
    }

    fn pair<T>(&mut self, key: &str, conv: impl Fn(&toml::Value) -> Option<T>) -> Result<Option<[T; 2]>>
    where
        T: Copy + Default,
    {
        let arr = match self.raw(key) {
            None => return Ok(None),
            Some(toml::Value::Array(a)) => a.clone(),
            Some(_) => return Err(Error::config(key, "expected an array")),
        };
        if arr.is_empty() || arr.len() > 2 {
            return Err(Error::config(key, "expected one or two entries"));
        }
        let mut out = [T::default(); 2];
        for (slot, v) in out.iter_mut().zip(&arr) {
            *slot = conv(v).ok_or_else(|| Error::config(key, "entry has the wrong type"))?;
        }
        Ok(Some(out))
    }

    fn float_pair(&mut self, key: &str) -> Result<Option<[f64; 2]>> {
        self.pair(key, |v| match v {
            toml::Value::Float(f) if f.is_finite() => Some(*f),
            toml::Value::Integer(i) => Some(*i as f64),
            _ => None,
        })
    }

    fn int_pair(&mut self, key: &str) -> Result<Option<[i64; 2]>> {
        self.pair(key, |v| v.as_integer())
    }

    fn note(&mut self, key: &str, value: impl std::fmt::Display) {
        self.echo.insert(key.to_string(), value.to_string());
    }
}

fn resolve(base: &Path, rel: &str) -> PathBuf {
    let p = PathBuf::from(rel);
    if p.is_absolute() {
        p
    } else {
        base.join(p)
    }
}

/// Reads and validates a configuration file.
pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::config("<file>", format!("cannot read {}: {e}", path.display())))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_config_str(&text, &base)
}

/// Parses configuration text; relative paths resolve against `base`.
pub fn parse_config_str(text: &str, base: &Path) -> Result<RunConfig> {
    let table: toml::Table = text.parse().map_err(|e: toml::de::Error| {
        Error::Parse(format!("malformed configuration: {}", e.message()))
    })?;
    let mut values = BTreeMap::new();
    flatten("", &table, &mut values);
    for key in values.keys() {
        if !KEYS.iter().any(|(k, ..)| k == key) {
            return Err(Error::config(key.clone(), "unknown key"));
        }
    }
    let mut rd = Reader {
        values,
        echo: BTreeMap::new(),
    };

    let d = rd.int("grid.d")?.ok_or_else(|| Error::config("grid.d", "required"))?;
    let n = rd.int("grid.N")?.ok_or_else(|| Error::config("grid.N", "required"))?;
    if !(d == 1 || d == 2) {
        return Err(Error::config("grid.d", "must be 1 or 2"));
    }
    let grid = GridSpec::new(d as usize, n.max(0) as usize).map_err(|e| Error::config("grid.N", e.to_string()))?;
    rd.note("grid.d", d);
    rd.note("grid.N", n);

    let mut sim = SimConfig::new(grid);
    sim.kind = match rd.string("equation.kind")?.as_deref().unwrap_or("drift") {
        "drift" => EquationKind::Drift,
        "sqg" => EquationKind::Sqg,
        other => return Err(Error::config("equation.kind", format!("`{other}` is not drift or sqg"))),
    };
    sim.sign = match rd.string("equation.sign")?.as_deref().unwrap_or("paper") {
        "paper" => AdvectionSign::Paper,
        "standard" => AdvectionSign::Standard,
        other => return Err(Error::config("equation.sign", format!("`{other}` is not paper or standard"))),
    };
    sim.alpha = rd.float("equation.alpha")?.unwrap_or(1.0);
    sim.t_end = rd.float("time.T")?.ok_or_else(|| Error::config("time.T", "required"))?;
    sim.dt = rd.float("time.dt")?;
    sim.cadence = rd.count("output.cadence", 1)?.unwrap_or(1);
    rd.note("equation.kind", format!("{:?}", sim.kind).to_lowercase());
    rd.note("equation.sign", format!("{:?}", sim.sign).to_lowercase());
    rd.note("equation.alpha", sim.alpha);
    rd.note("time.T", sim.t_end);
    rd.note("time.dt", sim.dt.map_or("auto".to_string(), |v| v.to_string()));
    rd.note("output.cadence", sim.cadence);

    let mut inputs = Vec::new();
    let vkind = rd.string("velocity.kind")?.unwrap_or_else(|| "zero".into());
    sim.velocity = match vkind.as_str() {
        "zero" => VelocitySpec::Zero,
        "constant" => {
            let c = rd.float_pair("velocity.constant")?.unwrap_or([0.0, 0.0]);
            rd.note("velocity.constant", format!("[{}, {}]", c[0], c[1]));
            VelocitySpec::Constant(c)
        }
        "shear" => {
            let a = rd.float("velocity.amplitude")?.unwrap_or(1.0);
            rd.note("velocity.amplitude", a);
            VelocitySpec::Shear { amplitude: a }
        }
        "recorded" => {
            let file = rd
                .string("velocity.file")?
                .ok_or_else(|| Error::config("velocity.file", "required for recorded velocity"))?;
            let path = resolve(base, &file);
            let frames = read_history(&path).map_err(|e| Error::config("velocity.file", e.to_string()))?;
            inputs.push(path);
            rd.note("velocity.file", file);
            VelocitySpec::Recorded(Arc::new(frames))
        }
        other => return Err(Error::config("velocity.kind", format!("`{other}` is not a velocity kind"))),
    };
    rd.note("velocity.kind", &vkind);
    sim.validate()?;

    let ikind = rd.string("initial.kind")?.unwrap_or_else(|| "random".into());
    let initial = match ikind.as_str() {
        "zero" => InitialSpec::Zero,
        "constant" => InitialSpec::Constant(rd.float("initial.value")?.unwrap_or(0.0)),
        "cosine" => InitialSpec::Cosine(rd.int_pair("initial.mode")?.unwrap_or([1, 0])),
        "random" => {
            let kmax = rd.count("initial.kmax", 1)?.unwrap_or(4);
            if 3 * kmax >= grid.n() {
                return Err(Error::config("initial.kmax", "must satisfy 3 kmax < N"));
            }
            InitialSpec::Random { kmax }
        }
        "gaussian" => {
            let sigma = rd.float("initial.sigma")?.unwrap_or(0.05);
            if sigma <= 0.0 {
                return Err(Error::config("initial.sigma", "must be > 0"));
            }
            InitialSpec::Gaussian {
                center: rd.float_pair("initial.center")?.unwrap_or([0.5, 0.5]),
                sigma,
            }
        }
        "weierstrass" => InitialSpec::Weierstrass {
            beta: rd.float("initial.beta")?.unwrap_or(0.3),
            levels: rd.count("initial.levels", 1)?.map(|v| v as u32),
        },
        "test_function" => {
            let level = rd.count("initial.level", 0)?.unwrap_or(4) as u32;
            if 2usize.pow(level) > grid.n() / 8 {
                return Err(Error::config("initial.level", "needs 2^level <= N/8"));
            }
            InitialSpec::TestFunction { level }
        }
        "file" => {
            let file = rd
                .string("initial.file")?
                .ok_or_else(|| Error::config("initial.file", "required for file initial data"))?;
            let path = resolve(base, &file);
            inputs.push(path.clone());
            InitialSpec::File(path)
        }
        other => return Err(Error::config("initial.kind", format!("`{other}` is not an initial kind"))),
    };
    rd.note("initial.kind", &ikind);
    rd.note("initial", format!("{initial:?}"));

    let snapshot_every = rd.count("output.snapshots", 0)?.unwrap_or(0);
    let write_history = rd.boolean("output.history")?.unwrap_or(false);
    let bmo_u = rd.boolean("diagnostics.bmo_u")?.unwrap_or(false);
    let beta_hat = rd.boolean("diagnostics.beta_hat")?.unwrap_or(false);
    rd.note("output.snapshots", snapshot_every);
    rd.note("output.history", write_history);
    rd.note("diagnostics.bmo_u", bmo_u);
    rd.note("diagnostics.beta_hat", beta_hat);

    let horizon = rd.float("dual.horizon")?.unwrap_or(sim.t_end);
    if horizon < 0.0 {
        return Err(Error::config("dual.horizon", "must be >= 0"));
    }
    let history = rd.string("dual.history")?.map(|f| resolve(base, &f));
    if let Some(p) = &history {
        inputs.push(p.clone());
    }
    let r = rd.float("dual.r")?;
    if let Some(r) = r {
        if !(r > 0.0 && r <= 1.0) {
            return Err(Error::config("dual.r", "must lie in (0, 1]"));
        }
    }
    let a = rd.float("dual.A")?.unwrap_or(DEFAULT_A);
    if a <= 1.0 {
        return Err(Error::config("dual.A", "must exceed 1"));
    }
    let dual = DualSpec {
        horizon,
        history,
        r,
        a,
        cadence: rd.count("dual.cadence", 1)?.unwrap_or(1),
        substeps: rd.count("dual.substeps", 1)?.unwrap_or(1),
    };
    rd.note("dual.horizon", dual.horizon);
    rd.note("dual.A", dual.a);
    rd.note("dual.cadence", dual.cadence);
    rd.note("dual.substeps", dual.substeps);
    if let Some(r) = dual.r {
        rd.note("dual.r", r);
    }
    if let Some(p) = rd.string("dual.history")? {
        rd.note("dual.history", p);
    }

    let memory_cap = match rd.count("history.memory_cap_mib", 1)? {
        Some(mib) => (mib as u64) << 20,
        None => DEFAULT_MEMORY_CAP,
    };
    let seed = match rd.int("seed")? {
        Some(s) if s < 0 => return Err(Error::config("seed", "must be >= 0")),
        Some(s) => s as u64,
        None => 0,
    };
    rd.note("history.memory_cap_mib", memory_cap >> 20);
    rd.note("seed", seed);

    Ok(RunConfig {
        sim,
        initial,
        snapshot_every,
        write_history,
        bmo_u,
        beta_hat,
        dual,
        memory_cap,
        seed,
        inputs,
        echo: rd.echo,
    })
}

impl RunConfig {
    pub fn initial_field(&self) -> Result<ScalarField> {
        self.initial.build(self.sim.grid, self.seed)
    }

    /// Class radius for dual membership columns.
    pub fn dual_radius(&self) -> f64 {
        match (self.dual.r, &self.initial) {
            (Some(r), _) => r,
            (None, InitialSpec::TestFunction { level }) => 2f64.powi(-(*level as i32)),
            (None, _) => 1.0,
        }
    }

    pub fn set_seed(&mut self, seed: u64) {
        self.seed = seed;
        self.echo.insert("seed".into(), seed.to_string());
    }
}
