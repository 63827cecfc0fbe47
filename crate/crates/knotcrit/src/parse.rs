//! Textual input formats: knot spec strings, family spec strings, and
//! Fourier curve files. These are the untrusted-input entry points; every
//! path through here must fail with `Error::InvalidSpec` rather than panic.
//!
//! Knot specs: `circle`, `circle:center=3,0`, `circle:center=1,0,r=2`,
//! `trefoil`, `ellipse:2,1`, `file:PATH`.
//! Family specs: `veronese:n=2,ell=3`, `trig:n=4`.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::family::{homogeneous_family, trig_family, FunctionFamily};
use crate::knot::{builtin_circle, ellipse, knot_from_fourier, trefoil, FourierKnotSpec, Knot};

/// Parser-level sanity caps; the library enforces its own chart-size limits,
/// these just keep obviously absurd CLI input from allocating.
const MAX_AMBIENT_DIM: usize = 64;
const MAX_HOMOGENEOUS_DEGREE: u32 = 512;

#[derive(Clone, Debug, PartialEq)]
pub enum KnotSpec {
    Circle { center: [f64; 2], radius: f64 },
    Trefoil,
    Ellipse { a: f64, b: f64 },
    File(PathBuf),
}

impl KnotSpec {
    /// Instantiate the curve. `File` variants read and validate the path.
    pub fn build(&self) -> Result<Knot> {
        match self {
            KnotSpec::Circle { center, radius } => builtin_circle(*center, *radius),
            KnotSpec::Trefoil => Ok(trefoil()),
            KnotSpec::Ellipse { a, b } => ellipse(*a, *b),
            KnotSpec::File(path) => knot_from_fourier(&load_fourier_file(path)?),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            KnotSpec::Circle { center, radius } => {
                format!("circle:center={},{},r={}", center[0], center[1], radius)
            }
            KnotSpec::Trefoil => "trefoil".to_string(),
            KnotSpec::Ellipse { a, b } => format!("ellipse:{a},{b}"),
            KnotSpec::File(path) => format!("file:{}", path.display()),
        }
    }
}

fn parse_number(token: &str, what: &str) -> Result<f64> {
    let value: f64 = token
        .trim()
        .parse()
        .map_err(|_| Error::InvalidSpec(format!("cannot parse {what} from {token:?}")))?;
    if !value.is_finite() {
        return Err(Error::InvalidSpec(format!("{what} must be finite")));
    }
    Ok(value)
}

/// Split `center=1,0,r=2` into keyed value lists: a token containing '='
/// opens a new key, bare tokens extend the current key's values.
fn keyed_values(params: &str) -> Result<Vec<(String, Vec<String>)>> {
    let mut out: Vec<(String, Vec<String>)> = Vec::new();
    for token in params.split(',') {
        if let Some((key, first)) = token.split_once('=') {
            out.push((key.trim().to_string(), vec![first.to_string()]));
        } else {
            match out.last_mut() {
                Some((_, values)) => values.push(token.to_string()),
                None => {
                    return Err(Error::InvalidSpec(format!(
                        "expected key=value, got {token:?}"
                    )))
                }
            }
        }
    }
    Ok(out)
}

pub fn parse_knot_spec(input: &str) -> Result<KnotSpec> {
    let input = input.trim();
    let (head, params) = match input.split_once(':') {
        Some((head, params)) => (head.trim(), Some(params)),
        None => (input, None),
    };
    match head {
        "circle" => {
            let mut center = [0.0, 0.0];
            let mut radius = 1.0;
            if let Some(params) = params {
                for (key, values) in keyed_values(params)? {
                    match (key.as_str(), values.as_slice()) {
                        ("center", [x, y]) => {
                            center = [
                                parse_number(x, "center x")?,
                                parse_number(y, "center y")?,
                            ];
                        }
                        ("r", [r]) => radius = parse_number(r, "radius")?,
                        (key, values) => {
                            return Err(Error::InvalidSpec(format!(
                                "unexpected circle parameter {key}={}",
                                values.join(",")
                            )))
                        }
                    }
                }
            }
            if radius <= 0.0 {
                return Err(Error::InvalidSpec("circle radius must be positive".into()));
            }
            Ok(KnotSpec::Circle { center, radius })
        }
        "trefoil" => {
            if params.is_some_and(|p| !p.is_empty()) {
                return Err(Error::InvalidSpec("trefoil takes no parameters".into()));
            }
            Ok(KnotSpec::Trefoil)
        }
        "ellipse" => {
            let params =
                params.ok_or_else(|| Error::InvalidSpec("ellipse needs two semi-axes".into()))?;
            let parts: Vec<&str> = params.split(',').collect();
            if parts.len() != 2 {
                return Err(Error::InvalidSpec(format!(
                    "ellipse expects a,b, got {params:?}"
                )));
            }
            let a = parse_number(parts[0], "semi-axis a")?;
            let b = parse_number(parts[1], "semi-axis b")?;
            if a <= 0.0 || b <= 0.0 {
                return Err(Error::InvalidSpec("semi-axes must be positive".into()));
            }
            Ok(KnotSpec::Ellipse { a, b })
        }
        "file" => {
            let path = params.unwrap_or("");
            if path.is_empty() {
                return Err(Error::InvalidSpec("file: needs a path".into()));
            }
            Ok(KnotSpec::File(PathBuf::from(path)))
        }
        other => Err(Error::InvalidSpec(format!(
            "unknown knot {other:?}; expected circle, trefoil, ellipse or file:PATH"
        ))),
    }
}

pub fn load_fourier_file(path: &Path) -> Result<FourierKnotSpec> {
    let text = std::fs::read_to_string(path)?;
    FourierKnotSpec::from_json(&text)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    Veronese { n: usize, ell: u32 },
    Trig { n: u32 },
}

impl FamilySpec {
    pub fn build(&self) -> Result<FunctionFamily> {
        match self {
            FamilySpec::Veronese { n, ell } => homogeneous_family(*n, *ell),
            FamilySpec::Trig { n } => trig_family(*n),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            FamilySpec::Veronese { n, ell } => format!("veronese:n={n},ell={ell}"),
            FamilySpec::Trig { n } => format!("trig:n={n}"),
        }
    }
}

fn parse_integer<T: std::str::FromStr>(token: &str, what: &str) -> Result<T> {
    token
        .trim()
        .parse()
        .map_err(|_| Error::InvalidSpec(format!("cannot parse {what} from {token:?}")))
}

pub fn parse_family_spec(input: &str) -> Result<FamilySpec> {
    let input = input.trim();
    let (head, params) = input
        .split_once(':')
        .ok_or_else(|| Error::InvalidSpec(format!(
            "family spec {input:?} needs parameters, e.g. veronese:n=2,ell=3 or trig:n=4"
        )))?;
    let pairs = keyed_values(params)?;
    match head.trim() {
        "veronese" => {
            let (mut n, mut ell) = (None, None);
            for (key, values) in &pairs {
                match (key.as_str(), values.as_slice()) {
                    ("n", [v]) => n = Some(parse_integer::<usize>(v, "n")?),
                    ("ell", [v]) => ell = Some(parse_integer::<u32>(v, "ell")?),
                    _ => {
                        return Err(Error::InvalidSpec(format!(
                            "unexpected veronese parameter {key:?}"
                        )))
                    }
                }
            }
            let n = n.ok_or_else(|| Error::InvalidSpec("veronese needs n".into()))?;
            let ell = ell.ok_or_else(|| Error::InvalidSpec("veronese needs ell".into()))?;
            if n > MAX_AMBIENT_DIM {
                return Err(Error::InvalidSpec(format!(
                    "ambient dimension {n} exceeds the supported maximum {MAX_AMBIENT_DIM}"
                )));
            }
            if ell > MAX_HOMOGENEOUS_DEGREE {
                return Err(Error::InvalidSpec(format!(
                    "degree {ell} exceeds the supported maximum {MAX_HOMOGENEOUS_DEGREE}"
                )));
            }
            Ok(FamilySpec::Veronese { n, ell })
        }
        "trig" => {
            let mut n = None;
            for (key, values) in &pairs {
                match (key.as_str(), values.as_slice()) {
                    ("n", [v]) => n = Some(parse_integer::<u32>(v, "n")?),
                    _ => {
                        return Err(Error::InvalidSpec(format!(
                            "unexpected trig parameter {key:?}"
                        )))
                    }
                }
            }
            Ok(FamilySpec::Trig {
                n: n.ok_or_else(|| Error::InvalidSpec("trig needs n".into()))?,
            })
        }
        other => Err(Error::InvalidSpec(format!(
            "unknown family {other:?}; expected veronese or trig"
        ))),
    }
}
