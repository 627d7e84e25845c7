//! JSON scene files. Exact rationals are written as `"p/q"` strings.

use serde::{Deserialize, Serialize};

use crate::envelope::SurfaceSystem;
use crate::error::{Error, Result};
use crate::exact::{format_rational, int, parse_rational, Mat4, Rational};
use crate::group::GroupTag;
use crate::motion::RationalMotion;
use crate::presets;
use crate::quadric::Quadric;
use crate::rational_fn::{RationalFunction, RationalFunctionSerde};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "lowercase")]
pub enum ElementarySpec {
    Cone {
        r: String,
    },
    Sphere {},
    Paraboloid {
        a: String,
        b: String,
    },
    /// Coefficients in the basis `x², y², z², xy, xz, yz, x, y, z, 1`.
    #[serde(alias = "custom10vector")]
    Custom {
        coeffs: Vec<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MotionSpec {
    pub group: GroupTag,
    pub domain: [String; 2],
    /// 4×4 rational-function entries, row-major.
    pub entries: Vec<Vec<RationalFunctionSerde>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_samples: Option<usize>,
    /// Curve-parameter range of the mesh for rational characteristics.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_range: Option<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_bounds: Option<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_window: Option<[String; 2]>,
    /// Bounding box `[[x, y, z]_min, [x, y, z]_max]` for traced characteristics.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_bounds: Option<[[f64; 3]; 2]>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OutputsSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneFile {
    #[serde(default)]
    pub description: String,
    pub elementary: ElementarySpec,
    pub motion: MotionSpec,
    /// Optional scale factor `λ(t)` of the implicit equations.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<RationalFunctionSerde>,
    #[serde(default)]
    pub options: OptionsSpec,
    #[serde(default)]
    pub outputs: OutputsSpec,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Elementary {
    Cone(Rational),
    Sphere,
    Paraboloid(Rational, Rational),
    Custom(Quadric),
}

impl Elementary {
    pub fn quadric(&self) -> Result<Quadric> {
        match self {
            Elementary::Cone(r) => Quadric::cone(r),
            Elementary::Sphere => Ok(Quadric::unit_sphere()),
            Elementary::Paraboloid(a, b) => Quadric::paraboloid(a, b),
            Elementary::Custom(q) => Ok(q.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SceneOptions {
    pub t_samples: usize,
    pub u_samples: usize,
    pub u_range: (Rational, Rational),
    pub tol: f64,
    pub t0: Option<Rational>,
    pub z_bounds: Option<(Rational, Rational)>,
    pub u_window: Option<(Rational, Rational)>,
    pub trace_bounds: Option<[[f64; 3]; 2]>,
}

/// A parsed scene.
#[derive(Clone, Debug)]
pub struct Scene {
    pub description: String,
    pub elementary: Elementary,
    pub system: SurfaceSystem,
    pub options: SceneOptions,
    pub output_dir: Option<String>,
}

impl PartialEq for Scene {
    fn eq(&self, o: &Self) -> bool {
        self.description == o.description
            && self.elementary == o.elementary
            && self.system.qbar == o.system.qbar
            && self.system.motion == o.system.motion
            && self.system.scale == o.system.scale
            && self.options == o.options
            && self.output_dir == o.output_dir
    }
}

fn field<T>(loc: impl Into<String>, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { message, location } => Error::Parse {
            location: format!("{} ({location})", loc.into()),
            message,
        },
        other => Error::Parse {
            location: loc.into(),
            message: other.to_string(),
        },
    })
}

fn pair(loc: &str, p: &Option<[String; 2]>) -> Result<Option<(Rational, Rational)>> {
    p.as_ref()
        .map(|[a, b]| {
            let lo = field(format!("{loc}[0]"), parse_rational(a))?;
            let hi = field(format!("{loc}[1]"), parse_rational(b))?;
            if lo >= hi {
                return Err(Error::Parse {
                    location: loc.into(),
                    message: "lower bound must be below upper bound".into(),
                });
            }
            Ok((lo, hi))
        })
        .transpose()
}

fn rf_serde(f: &RationalFunction) -> RationalFunctionSerde {
    f.to_serde()
}

impl SceneFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            location: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scene serializes") + "\n"
    }

    pub fn parse(&self) -> Result<Scene> {
        let elementary = match &self.elementary {
            ElementarySpec::Cone { r } => Elementary::Cone(field("elementary.params.r", parse_rational(r))?),
            ElementarySpec::Sphere {} => Elementary::Sphere,
            ElementarySpec::Paraboloid { a, b } => Elementary::Paraboloid(
                field("elementary.params.a", parse_rational(a))?,
                field("elementary.params.b", parse_rational(b))?,
            ),
            ElementarySpec::Custom { coeffs } => {
                Elementary::Custom(field("elementary.params.coeffs", Quadric::from_strings(coeffs))?)
            }
        };
        let qbar = field("elementary", elementary.quadric())?;

        let m = &self.motion;
        let domain = (
            field("motion.domain[0]", parse_rational(&m.domain[0]))?,
            field("motion.domain[1]", parse_rational(&m.domain[1]))?,
        );
        if m.entries.len() != 4 || m.entries.iter().any(|r| r.len() != 4) {
            return Err(Error::Parse {
                location: "motion.entries".into(),
                message: "expected a 4×4 array".into(),
            });
        }
        let mut e = Mat4::<RationalFunction>::zero();
        for i in 0..4 {
            for j in 0..4 {
                e.0[i][j] = field(format!("motion.entries[{i}][{j}]"), RationalFunction::try_from(&m.entries[i][j]))?;
            }
        }
        let motion = field("motion", RationalMotion::new(e, domain, m.group))?;
        let mut system = SurfaceSystem::new(qbar, motion).with_description(self.description.clone());
        if let Some(s) = &self.scale {
            let l = field("scale", RationalFunction::try_from(s))?;
            system = field("scale", system.with_scale(l))?;
        }

        let o = &self.options;
        let t0 = o.t0.as_ref().map(|s| field("options.t0", parse_rational(s))).transpose()?;
        let options = SceneOptions {
            t_samples: o.t_samples.unwrap_or(40),
            u_samples: o.u_samples.unwrap_or(40),
            u_range: pair("options.u_range", &o.u_range)?.unwrap_or((int(-1), int(1))),
            tol: o.tol.unwrap_or(1e-8),
            t0,
            z_bounds: pair("options.z_bounds", &o.z_bounds)?,
            u_window: pair("options.u_window", &o.u_window)?,
            trace_bounds: o.trace_bounds,
        };
        if options.t_samples < 2 || options.u_samples < 2 {
            return Err(Error::Parse {
                location: "options".into(),
                message: "t_samples and u_samples must be at least 2".into(),
            });
        }
        Ok(Scene {
            description: self.description.clone(),
            elementary,
            system,
            options,
            output_dir: self.outputs.dir.clone(),
        })
    }
}

impl Scene {
    pub fn load(path: &std::path::Path) -> Result<Scene> {
        let text = std::fs::read_to_string(path)?;
        SceneFile::from_json(&text)?.parse()
    }

    pub fn to_file(&self) -> SceneFile {
        let s = |q: &Rational| format_rational(q);
        let p2 = |p: &(Rational, Rational)| [s(&p.0), s(&p.1)];
        let elementary = match &self.elementary {
            Elementary::Cone(r) => ElementarySpec::Cone { r: s(r) },
            Elementary::Sphere => ElementarySpec::Sphere {},
            Elementary::Paraboloid(a, b) => ElementarySpec::Paraboloid { a: s(a), b: s(b) },
            Elementary::Custom(q) => ElementarySpec::Custom { coeffs: q.to_strings() },
        };
        let m = &self.system.motion;
        let o = &self.options;
        SceneFile {
            description: self.description.clone(),
            elementary,
            motion: MotionSpec {
                group: m.tag(),
                domain: p2(m.domain()),
                entries: m.entries().0.iter().map(|r| r.iter().map(rf_serde).collect()).collect(),
            },
            scale: self.system.scale.as_ref().map(rf_serde),
            options: OptionsSpec {
                t_samples: Some(o.t_samples),
                u_samples: Some(o.u_samples),
                u_range: Some(p2(&o.u_range)),
                tol: Some(o.tol),
                t0: o.t0.as_ref().map(s),
                z_bounds: o.z_bounds.as_ref().map(p2),
                u_window: o.u_window.as_ref().map(p2),
                trace_bounds: o.trace_bounds,
            },
            outputs: OutputsSpec {
                dir: self.output_dir.clone(),
            },
        }
    }

    /// Instant for single-instant commands: the scene's `t0` or the
    /// domain midpoint.
    pub fn t0(&self) -> Rational {
        self.options.t0.clone().unwrap_or_else(|| {
            let (lo, hi) = self.system.motion.domain();
            (lo + hi) / int(2)
        })
    }
}

fn scene(description: &str, elementary: Elementary, motion: RationalMotion, options: SceneOptions) -> Scene {
    let qbar = elementary.quadric().expect("valid preset");
    Scene {
        description: description.into(),
        system: SurfaceSystem::new(qbar, motion).with_description(description),
        elementary,
        options,
        output_dir: None,
    }
}

fn default_options() -> SceneOptions {
    SceneOptions {
        t_samples: 40,
        u_samples: 40,
        u_range: (int(-1), int(1)),
        tol: 1e-8,
        t0: None,
        z_bounds: None,
        u_window: None,
        trace_bounds: None,
    }
}

/// Scenes shipped in `scenes/`, by file stem.
pub fn bundled() -> Vec<(&'static str, Scene)> {
    let running = SceneOptions {
        z_bounds: Some((int(2), int(5))),
        u_window: Some((int(-1), int(1))),
        t0: Some(crate::exact::rat(1, 2)),
        ..default_options()
    };
    let traced = SceneOptions {
        u_range: (int(0), int(1)),
        tol: 1e-9,
        trace_bounds: Some([[-2.0; 3], [2.0; 3]]),
        ..default_options()
    };
    vec![
        (
            "running_example",
            scene(
                "cone x^2 + y^2 - z^2/25 under a rational rigid motion",
                Elementary::Cone(presets::running_example_radius()),
                presets::running_example(),
                running,
            ),
        ),
        (
            "pipe",
            scene("unit sphere translated along the x-axis", Elementary::Sphere, presets::pipe(), default_options()),
        ),
        (
            "canal",
            scene(
                "unit sphere scaled by 1 + t/2 and translated along the x-axis",
                Elementary::Sphere,
                presets::canal(),
                default_options(),
            ),
        ),
        (
            "sheared_ellipsoid",
            scene(
                "unit sphere under a shear and translation (moving ellipsoids)",
                Elementary::Sphere,
                presets::sheared_ellipsoid(),
                traced.clone(),
            ),
        ),
        (
            "paraboloid",
            scene(
                "paraboloid x^2 + 2y^2 - z under a rational rigid motion",
                Elementary::Paraboloid(int(1), int(2)),
                presets::paraboloid_motion(),
                SceneOptions {
                    trace_bounds: Some([[-3.0, -3.0, -1.0], [3.0, 3.0, 9.0]]),
                    ..traced
                },
            ),
        ),
    ]
}

/// Writes the bundled scenes into `dir` as `<name>.json`.
pub fn write_bundled(dir: &std::path::Path) -> Result<Vec<std::path::PathBuf>> {
    std::fs::create_dir_all(dir)?;
    bundled()
        .into_iter()
        .map(|(name, s)| {
            let p = dir.join(format!("{name}.json"));
            std::fs::write(&p, s.to_file().to_json())?;
            Ok(p)
        })
        .collect()
}
