//! Scenario files: `[section]` headers, `key = value` lines, `#` comments.
//!
//! Values carry optional unit suffixes (`500 km`, `-66 dBm`, `60 MHz`,
//! `500 Kbits`, `1 ms`, `30 deg`, …). Everything is converted to linear SI
//! on the way in; [`Scenario::render`] writes SI values back out, so that a
//! rendered scenario parses to an identical one.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::channel::{DopplerSpec, SrFading, XiExponent};
use crate::error::{Error, Result};
use crate::geometry::{circular_orbit_speed, half_track_for_plane, PassGeometry, EARTH_RADIUS};
use crate::montecarlo::SimConfig;
use crate::schemes::{
    DmaxPolicy, LinkBudget, LinkModel, LinkSetup, PartitionSpec, PatConfig, RatConfig, Scheme, TrafficSpec,
};
use crate::units::{db_to_linear, dbm_to_watts, dbw_to_watts};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dim {
    Length,
    Speed,
    Power,
    Ratio,
    Plain,
    Frequency,
    Time,
    Bits,
    Rate,
    Angle,
    Count,
    Choice(&'static [&'static str]),
    List,
}

struct KeySpec {
    key: &'static str,
    dim: Dim,
}

const SECTIONS: &[&str] = &["geometry", "fading", "partition", "link", "rat", "pat", "traffic", "sim"];

const KEYS: &[KeySpec] = &[
    KeySpec { key: "geometry.earth_radius", dim: Dim::Length },
    KeySpec { key: "geometry.orbit_height", dim: Dim::Length },
    KeySpec { key: "geometry.coverage_radius", dim: Dim::Length },
    KeySpec { key: "geometry.half_track", dim: Dim::Length },
    KeySpec { key: "geometry.sats_per_plane", dim: Dim::Count },
    KeySpec { key: "geometry.sat_speed", dim: Dim::Speed },
    KeySpec { key: "geometry.terminal_offset", dim: Dim::Length },
    KeySpec { key: "geometry.path_loss_exp", dim: Dim::Plain },
    KeySpec { key: "geometry.slot_len", dim: Dim::Time },
    KeySpec { key: "geometry.d_max", dim: Dim::Choice(&["coverage", "pass"]) },
    KeySpec { key: "fading.m", dim: Dim::Plain },
    KeySpec { key: "fading.b0", dim: Dim::Plain },
    KeySpec { key: "fading.omega", dim: Dim::Plain },
    KeySpec { key: "fading.f_scatter_max", dim: Dim::Frequency },
    KeySpec { key: "fading.mean_aoa", dim: Dim::Angle },
    KeySpec { key: "fading.aoa_width", dim: Dim::Plain },
    KeySpec { key: "fading.xi_exponent", dim: Dim::Choice(&["2", "n"]) },
    KeySpec { key: "partition.states", dim: Dim::Count },
    KeySpec { key: "partition.thresholds", dim: Dim::List },
    KeySpec { key: "link.bandwidth", dim: Dim::Frequency },
    KeySpec { key: "link.noise_power", dim: Dim::Power },
    KeySpec { key: "rat.tx_power", dim: Dim::Power },
    KeySpec { key: "rat.min_snr", dim: Dim::Ratio },
    KeySpec { key: "pat.max_power", dim: Dim::Power },
    KeySpec { key: "pat.fixed_rate", dim: Dim::Rate },
    KeySpec { key: "traffic.packet_bits", dim: Dim::Bits },
    KeySpec { key: "traffic.delay_threshold", dim: Dim::Time },
    KeySpec { key: "sim.n_samples", dim: Dim::Count },
    KeySpec { key: "sim.seed", dim: Dim::Count },
];

fn spec(key: &str) -> Option<&'static KeySpec> {
    KEYS.iter().find(|k| k.key == key)
}

fn unit_factor(dim: Dim, unit: &str) -> Option<Conversion> {
    use Conversion::*;
    let scale = |s| Some(Scale(s));
    match (dim, unit) {
        (Dim::Length, "" | "m") => scale(1.0),
        (Dim::Length, "km") => scale(1e3),
        (Dim::Speed, "" | "m/s") => scale(1.0),
        (Dim::Speed, "km/s") => scale(1e3),
        (Dim::Power, "" | "W") => scale(1.0),
        (Dim::Power, "mW") => scale(1e-3),
        (Dim::Power, "kW") => scale(1e3),
        (Dim::Power, "dBW") => Some(DbW),
        (Dim::Power, "dBm") => Some(DbM),
        (Dim::Ratio, "") => scale(1.0),
        (Dim::Ratio, "dB") => Some(Db),
        (Dim::Plain | Dim::Count, "") => scale(1.0),
        (Dim::Frequency, "" | "Hz") => scale(1.0),
        (Dim::Frequency, "kHz") => scale(1e3),
        (Dim::Frequency, "MHz") => scale(1e6),
        (Dim::Frequency, "GHz") => scale(1e9),
        (Dim::Time, "" | "s") => scale(1.0),
        (Dim::Time, "ms") => scale(1e-3),
        (Dim::Time, "us" | "µs") => scale(1e-6),
        (Dim::Bits, "" | "bit" | "bits") => scale(1.0),
        (Dim::Bits, "kbit" | "kbits" | "Kbit" | "Kbits") => scale(1e3),
        (Dim::Bits, "Mbit" | "Mbits") => scale(1e6),
        (Dim::Rate, "" | "bps" | "bit/s") => scale(1.0),
        (Dim::Rate, "kbps" | "kbit/s" | "Kbit/s") => scale(1e3),
        (Dim::Rate, "Mbps" | "Mbit/s") => scale(1e6),
        (Dim::Rate, "Gbps" | "Gbit/s") => scale(1e9),
        (Dim::Angle, "" | "rad") => scale(1.0),
        (Dim::Angle, "deg") => scale(std::f64::consts::PI / 180.0),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy)]
enum Conversion {
    Scale(f64),
    Db,
    DbW,
    DbM,
}

impl Conversion {
    fn apply(self, x: f64) -> f64 {
        match self {
            Conversion::Scale(s) => x * s,
            Conversion::Db => db_to_linear(x),
            Conversion::DbW => dbw_to_watts(x),
            Conversion::DbM => dbm_to_watts(x),
        }
    }
}

/// Splits `"-66 dBm"` / `"500km"` into the number and its unit suffix.
fn split_quantity(text: &str) -> Option<(f64, &str)> {
    let bytes = text.as_bytes();
    let mut i = 0;
    if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
        i += 1;
    }
    let digits_start = i;
    while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
        i += 1;
    }
    if i == digits_start {
        return None;
    }
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            j += 1;
        }
        let exp_digits = j;
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        if j > exp_digits {
            i = j;
        }
    }
    let number = text[..i].parse().ok()?;
    Some((number, text[i..].trim()))
}

fn normalize_minus(text: &str) -> String {
    text.trim().replace('\u{2212}', "-")
}

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    key: String,
    value: String,
    line: usize,
}

/// The key/value content of a scenario file, in file order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScenarioDoc {
    entries: Vec<Entry>,
    sections: Vec<(String, usize)>,
}

impl ScenarioDoc {
    pub fn parse(text: &str) -> Result<Self> {
        let mut doc = ScenarioDoc::default();
        let mut section: Option<String> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            if let Some(rest) = body.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| Error::Parse { line, message: format!("unterminated section header `{body}`") })?
                    .trim();
                if !SECTIONS.contains(&name) {
                    return Err(Error::UnknownKey { key: format!("[{name}]"), line });
                }
                if doc.sections.iter().any(|(s, _)| s == name) {
                    return Err(Error::Parse { line, message: format!("section [{name}] appears twice") });
                }
                doc.sections.push((name.to_string(), line));
                section = Some(name.to_string());
                continue;
            }
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| Error::Parse { line, message: format!("expected `key = value`, found `{body}`") })?;
            let key = key.trim();
            let value = value.trim();
            let Some(sec) = &section else {
                return Err(Error::Parse { line, message: format!("`{key}` appears before any [section]") });
            };
            if key.is_empty() || value.is_empty() {
                return Err(Error::Parse { line, message: "empty key or value".into() });
            }
            let full = format!("{sec}.{key}");
            if spec(&full).is_none() {
                return Err(Error::UnknownKey { key: full, line });
            }
            if doc.entries.iter().any(|e| e.key == full) {
                return Err(Error::Parse { line, message: format!("`{full}` is set twice") });
            }
            doc.entries.push(Entry { key: full, value: value.to_string(), line });
        }
        Ok(doc)
    }

    fn entry(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    fn line_of(&self, key: &str) -> usize {
        self.entry(key).map_or(0, |e| e.line)
    }

    fn has_section(&self, name: &str) -> bool {
        self.sections.iter().any(|(s, _)| s == name) || self.entries.iter().any(|e| e.key.split('.').next() == Some(name))
    }

    /// Replaces (or adds) the raw text of `key`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if spec(key).is_none() {
            return Err(Error::UnknownKey { key: key.to_string(), line: 0 });
        }
        match self.entries.iter_mut().find(|e| e.key == key) {
            Some(e) => e.value = value.to_string(),
            None => self.entries.push(Entry { key: key.to_string(), value: value.to_string(), line: 0 }),
        }
        Ok(())
    }

    /// Numeric value of `key` in SI units, if present.
    pub fn number(&self, key: &str) -> Result<Option<f64>> {
        let Some(e) = self.entry(key) else { return Ok(None) };
        let dim = spec(key).expect("entries hold known keys").dim;
        convert(dim, &e.value).map(Some).map_err(|message| Error::Parse { line: e.line, message: format!("{key}: {message}") })
    }

    fn count(&self, key: &str) -> Result<Option<u64>> {
        // seeds can exceed 2^53, so try an exact integer first
        if let Some(n) = self.entry(key).and_then(|e| e.value.parse::<u64>().ok()) {
            return Ok(Some(n));
        }
        let Some(v) = self.number(key)? else { return Ok(None) };
        if v < 0.0 || v.fract() != 0.0 || v > u64::MAX as f64 {
            return Err(self.invalid(key, format!("{v} is not a non-negative integer")));
        }
        Ok(Some(v as u64))
    }

    fn choice(&self, key: &str) -> Result<Option<&str>> {
        let Some(e) = self.entry(key) else { return Ok(None) };
        let Dim::Choice(options) = spec(key).expect("known key").dim else { unreachable!() };
        if !options.contains(&e.value.as_str()) {
            return Err(self.invalid(key, format!("`{}` is not one of {}", e.value, options.join(", "))));
        }
        Ok(Some(e.value.as_str()))
    }

    fn list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        let Some(e) = self.entry(key) else { return Ok(None) };
        e.value
            .split(',')
            .map(|item| {
                convert(Dim::Plain, item)
                    .map_err(|message| Error::Parse { line: e.line, message: format!("{key}: {message}") })
            })
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    fn required(&self, key: &str) -> Result<f64> {
        self.number(key)?.ok_or_else(|| Error::Validation {
            key: key.to_string(),
            line: 0,
            message: "required key is missing".into(),
        })
    }

    fn invalid(&self, key: &str, message: impl Into<String>) -> Error {
        Error::Validation { key: key.to_string(), line: self.line_of(key), message: message.into() }
    }

    // re-labels a component's parameter error with the scenario key it came from
    fn locate(&self, section: &str) -> impl Fn(Error) -> Error + '_ {
        let section = section.to_string();
        move |err| match err {
            Error::InvalidParameter { name, reason } => {
                let key = if name.contains('.') { name.to_string() } else { format!("{section}.{name}") };
                Error::Validation { line: self.line_of(&key), key, message: reason }
            }
            Error::SlotTooLong { .. } => {
                Error::Validation { key: "geometry.slot_len".into(), line: self.line_of("geometry.slot_len"), message: err.to_string() }
            }
            other => other,
        }
    }
}

fn convert(dim: Dim, text: &str) -> std::result::Result<f64, String> {
    let text = normalize_minus(text);
    let (x, unit) = split_quantity(&text).ok_or_else(|| format!("`{text}` is not a number"))?;
    let conv = unit_factor(dim, unit).ok_or_else(|| format!("unit `{unit}` is not accepted here"))?;
    let v = conv.apply(x);
    if !v.is_finite() {
        return Err(format!("`{text}` is not finite"));
    }
    Ok(v)
}

/// A fully validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub link: LinkSetup,
    pub sim: SimConfig,
    doc: ScenarioDoc,
}

impl PartialEq for Scenario {
    fn eq(&self, other: &Self) -> bool {
        self.link == other.link && self.sim == other.sim
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_scenario(s)
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    Scenario::from_doc(ScenarioDoc::parse(text)?)
}

impl Scenario {
    pub fn from_doc(doc: ScenarioDoc) -> Result<Self> {
        let (link, sim) = Self::build(&doc)?;
        Ok(Scenario { link, sim, doc })
    }

    fn build(doc: &ScenarioDoc) -> Result<(LinkSetup, SimConfig)> {
        let geo_err = doc.locate("geometry");
        let earth_radius = doc.number("geometry.earth_radius")?.unwrap_or(EARTH_RADIUS);
        let orbit_height = doc.required("geometry.orbit_height")?;
        let half_track = match (doc.number("geometry.half_track")?, doc.count("geometry.sats_per_plane")?) {
            (Some(_), Some(_)) => {
                return Err(doc.invalid("geometry.sats_per_plane", "give either half_track or sats_per_plane"))
            }
            (Some(h), None) => h,
            (None, Some(0)) => return Err(doc.invalid("geometry.sats_per_plane", "must be at least 1")),
            (None, Some(n)) => half_track_for_plane(earth_radius, n.min(u64::from(u32::MAX)) as u32),
            (None, None) => doc.required("geometry.half_track")?,
        };
        let sat_speed = match doc.number("geometry.sat_speed")? {
            Some(v) => v,
            None if earth_radius > 0.0 && orbit_height > -earth_radius => circular_orbit_speed(earth_radius, orbit_height),
            None => f64::NAN,
        };
        let geometry = PassGeometry {
            earth_radius,
            orbit_height,
            coverage_radius: doc.required("geometry.coverage_radius")?,
            half_track,
            sat_speed,
            terminal_offset: doc.number("geometry.terminal_offset")?.unwrap_or(0.0),
            path_loss_exp: doc.number("geometry.path_loss_exp")?.unwrap_or(2.0),
        }
        .validated()
        .map_err(&geo_err)?;
        let slot_len = doc.required("geometry.slot_len")?;
        let d_max_policy = match doc.choice("geometry.d_max")? {
            Some("pass") => DmaxPolicy::Pass,
            _ => DmaxPolicy::Coverage,
        };

        let fading_err = doc.locate("fading");
        let fading = SrFading::new(doc.required("fading.m")?, doc.required("fading.b0")?, doc.required("fading.omega")?)
            .map_err(&fading_err)?;
        let doppler = DopplerSpec::new(
            doc.required("fading.f_scatter_max")?,
            doc.required("fading.mean_aoa")?,
            doc.required("fading.aoa_width")?,
        )
        .map_err(&fading_err)?;
        let xi_exponent = match doc.choice("fading.xi_exponent")? {
            Some("n") => XiExponent::Order,
            _ => XiExponent::Squared,
        };

        let states = doc.count("partition.states")?;
        let partition = match (doc.list("partition.thresholds")?, states) {
            (Some(upper), states) => {
                if let Some(k) = states {
                    if k != upper.len() as u64 + 2 {
                        return Err(doc.invalid(
                            "partition.states",
                            format!("{k} states need {} thresholds above the first", k.saturating_sub(2)),
                        ));
                    }
                }
                PartitionSpec::Explicit { upper }
            }
            (None, Some(k)) if k < 2 => return Err(doc.invalid("partition.states", format!("{k} < 2"))),
            (None, Some(k)) => PartitionSpec::EqualProbability { states: k as usize },
            (None, None) => PartitionSpec::default(),
        };

        let link_err = doc.locate("link");
        let budget = LinkBudget::new(
            doc.required("link.bandwidth")?,
            doc.required("link.noise_power")?,
            geometry.path_loss_exp,
        )
        .map_err(&link_err)?;

        let scheme = match (doc.has_section("rat"), doc.has_section("pat")) {
            (true, false) => Scheme::Rat(
                RatConfig::new(doc.required("rat.tx_power")?, doc.required("rat.min_snr")?).map_err(doc.locate("rat"))?,
            ),
            (false, true) => Scheme::Pat(
                PatConfig::new(doc.required("pat.max_power")?, doc.required("pat.fixed_rate")?)
                    .map_err(doc.locate("pat"))?,
            ),
            (true, true) => return Err(doc.invalid("pat", "exactly one of [rat] and [pat] is allowed")),
            (false, false) => return Err(doc.invalid("rat", "a [rat] or [pat] section is required")),
        };

        let traffic = TrafficSpec::new(doc.required("traffic.packet_bits")?, doc.required("traffic.delay_threshold")?)
            .map_err(doc.locate("traffic"))?;
        let sim = SimConfig::new(
            doc.count("sim.n_samples")?.unwrap_or(100_000),
            doc.count("sim.seed")?.unwrap_or(1),
        )
        .map_err(doc.locate("sim"))?;

        let link = LinkSetup {
            geometry,
            slot_len,
            d_max_policy,
            fading,
            doppler,
            xi_exponent,
            budget,
            scheme,
            traffic,
            partition,
        };
        // derived checks: slot length, coverage, partition ordering
        LinkModel::new(link.clone()).map_err(|e| match e {
            Error::InvalidParameter { name: "partition.thresholds", reason } => {
                Error::Validation { key: "partition.thresholds".into(), line: doc.line_of("partition.thresholds"), message: reason }
            }
            other => geo_err(other),
        })?;
        Ok((link, sim))
    }

    pub fn doc(&self) -> &ScenarioDoc {
        &self.doc
    }

    pub fn model(&self) -> Result<LinkModel> {
        LinkModel::new(self.link.clone())
    }

    /// A copy with the raw text of `key` replaced, fully re-validated.
    pub fn with_value(&self, key: &str, value: &str) -> Result<Scenario> {
        let mut doc = self.doc.clone();
        doc.set(key, value)?;
        Scenario::from_doc(doc)
    }

    pub fn with_seed(mut self, seed: u64) -> Scenario {
        self.sim.seed = seed;
        let _ = self.doc.set("sim.seed", &seed.to_string());
        self
    }

    /// Canonical text form with every value in SI units.
    pub fn render(&self) -> String {
        let l = &self.link;
        let g = &l.geometry;
        let mut out = String::new();
        let mut w = |s: String| out.push_str(&s);
        w(format!(
            "[geometry]\nearth_radius = {} m\norbit_height = {} m\ncoverage_radius = {} m\nhalf_track = {} m\n\
             sat_speed = {} m/s\nterminal_offset = {} m\npath_loss_exp = {}\nslot_len = {} s\nd_max = {}\n\n",
            g.earth_radius,
            g.orbit_height,
            g.coverage_radius,
            g.half_track,
            g.sat_speed,
            g.terminal_offset,
            g.path_loss_exp,
            l.slot_len,
            match l.d_max_policy {
                DmaxPolicy::Coverage => "coverage",
                DmaxPolicy::Pass => "pass",
            }
        ));
        w(format!(
            "[fading]\nm = {}\nb0 = {}\nomega = {}\nf_scatter_max = {} Hz\nmean_aoa = {} rad\naoa_width = {}\nxi_exponent = {}\n\n",
            l.fading.m(),
            l.fading.b0(),
            l.fading.omega(),
            l.doppler.f_scatter_max,
            l.doppler.mean_aoa,
            l.doppler.aoa_width,
            match l.xi_exponent {
                XiExponent::Squared => "2",
                XiExponent::Order => "n",
            }
        ));
        match &l.partition {
            PartitionSpec::EqualProbability { states } => w(format!("[partition]\nstates = {states}\n\n")),
            PartitionSpec::Explicit { upper } => {
                let list: Vec<String> = upper.iter().map(f64::to_string).collect();
                w(format!("[partition]\nstates = {}\nthresholds = {}\n\n", upper.len() + 2, list.join(", ")))
            }
        }
        w(format!("[link]\nbandwidth = {} Hz\nnoise_power = {} W\n\n", l.budget.bandwidth, l.budget.noise_power));
        match l.scheme {
            Scheme::Rat(r) => w(format!("[rat]\ntx_power = {} W\nmin_snr = {}\n\n", r.tx_power, r.min_snr)),
            Scheme::Pat(p) => w(format!("[pat]\nmax_power = {} W\nfixed_rate = {} bps\n\n", p.max_power, p.fixed_rate)),
        }
        w(format!(
            "[traffic]\npacket_bits = {} bits\ndelay_threshold = {} s\n\n",
            l.traffic.packet_bits, l.traffic.delay_threshold
        ));
        let _ = write!(out, "[sim]\nn_samples = {}\nseed = {}\n", self.sim.n_samples, self.sim.seed);
        out
    }
}

/// A parameter sweep: one scenario key and the raw values it takes.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub key: String,
    pub values: Vec<String>,
}

impl SweepSpec {
    /// Column name of the swept value in CSV output (SI units).
    pub fn column(&self) -> String {
        if self.key == "geometry.orbit_height" {
            return "h_m".into();
        }
        let name = self.key.rsplit('.').next().unwrap_or(&self.key);
        let suffix = match spec(&self.key).map(|s| s.dim) {
            Some(Dim::Length) => "_m",
            Some(Dim::Speed) => "_mps",
            Some(Dim::Power) => "_w",
            Some(Dim::Frequency) => "_hz",
            Some(Dim::Time) => "_s",
            Some(Dim::Bits) => "_bits",
            Some(Dim::Rate) => "_bps",
            Some(Dim::Angle) => "_rad",
            _ => "",
        };
        format!("{name}{suffix}")
    }
}

impl FromStr for SweepSpec {
    type Err = Error;

    /// `KEY=START:STOP:STEPS` (linear in the written unit) or `KEY=V1,V2,…`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |message: String| Error::Validation { key: "sweep".into(), line: 0, message };
        let (key, rhs) = s.split_once('=').ok_or_else(|| bad(format!("`{s}` is not KEY=VALUES")))?;
        let key = key.trim();
        let dim = spec(key).ok_or_else(|| Error::UnknownKey { key: key.to_string(), line: 0 })?.dim;
        if matches!(dim, Dim::Choice(_) | Dim::List) {
            return Err(bad(format!("`{key}` is not numeric")));
        }
        let rhs = normalize_minus(rhs);
        let values = if rhs.contains(':') {
            let parts: Vec<&str> = rhs.split(':').map(str::trim).collect();
            let [start, stop, steps] = parts.as_slice() else {
                return Err(bad(format!("`{rhs}` is not START:STOP:STEPS")));
            };
            let (a, ua) = split_quantity(start).ok_or_else(|| bad(format!("`{start}` is not a number")))?;
            let (b, ub) = split_quantity(stop).ok_or_else(|| bad(format!("`{stop}` is not a number")))?;
            if ua != ub {
                return Err(bad(format!("start and stop use different units (`{ua}` vs `{ub}`)")));
            }
            let steps: usize = steps.parse().map_err(|_| bad(format!("`{steps}` is not a step count")))?;
            if steps == 0 {
                return Err(bad("step count must be at least 1".into()));
            }
            (0..steps)
                .map(|i| {
                    let x = if steps == 1 { a } else { a + (b - a) * i as f64 / (steps - 1) as f64 };
                    if ua.is_empty() { x.to_string() } else { format!("{x} {ua}") }
                })
                .collect()
        } else {
            rhs.split(',').map(|v| v.trim().to_string()).collect::<Vec<_>>()
        };
        if values.iter().any(String::is_empty) {
            return Err(bad("empty sweep value".into()));
        }
        for v in &values {
            convert(dim, v).map_err(bad)?;
        }
        Ok(SweepSpec { key: key.to_string(), values })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantity_splitting() {
        assert_eq!(split_quantity("500 km"), Some((500.0, "km")));
        assert_eq!(split_quantity("500km"), Some((500.0, "km")));
        assert_eq!(split_quantity("-66 dBm"), Some((-66.0, "dBm")));
        assert_eq!(split_quantity("1e-3 s"), Some((1e-3, "s")));
        assert_eq!(split_quantity("2.5e3"), Some((2500.0, "")));
        assert_eq!(split_quantity("dB"), None);
    }

    #[test]
    fn unit_conversion() {
        assert_eq!(convert(Dim::Power, "\u{2212}66 dBm").unwrap(), dbm_to_watts(-66.0));
        assert_eq!(convert(Dim::Bits, "500 Kbits").unwrap(), 5e5);
        assert_eq!(convert(Dim::Frequency, "60 MHz").unwrap(), 60e6);
        assert_eq!(convert(Dim::Ratio, "0 dB").unwrap(), 1.0);
        assert_eq!(convert(Dim::Time, "1 ms").unwrap(), 1e-3);
        assert!((convert(Dim::Angle, "180 deg").unwrap() - std::f64::consts::PI).abs() < 1e-15);
        assert!(convert(Dim::Length, "5 MHz").is_err());
        assert!(convert(Dim::Plain, "abc").is_err());
    }

    #[test]
    fn sweep_specs() {
        let s: SweepSpec = "geometry.orbit_height=500km:1100km:7".parse().unwrap();
        assert_eq!(s.values.len(), 7);
        assert_eq!(s.values[1], "600 km");
        assert_eq!(s.column(), "h_m");
        let t: SweepSpec = "traffic.delay_threshold = 0.2 ms, 0.5 ms".parse().unwrap();
        assert_eq!(t.values, vec!["0.2 ms", "0.5 ms"]);
        assert_eq!(t.column(), "delay_threshold_s");
        assert!("geometry.d_max=1:2:3".parse::<SweepSpec>().is_err());
        assert!("nope.key=1:2:3".parse::<SweepSpec>().is_err());
        assert!("rat.tx_power=30dBW:40W:3".parse::<SweepSpec>().is_err());
        assert!("rat.tx_power=30dBW:40dBW:0".parse::<SweepSpec>().is_err());
    }
}
