//! Scenario JSON files (schema version 1).
//!
//! Parsing is strict: unknown keys are rejected and every world invariant is
//! checked before a [`ScenarioSpec`] is handed out. Angles are degrees in the
//! file and radians everywhere else.

use legiplan_core::{
    wrap_angle, ControlStd, Goal, LegibilityParams, Mode, ObserverState, Obstacle, PlannerParams,
    Point2, RobotState, ScenarioSpec, TaskCostWeights, ValidationError,
};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    /// Not JSON, or JSON that does not fit the schema.
    #[error("{path}: {message}")]
    Malformed { path: String, message: String },
    #[error(transparent)]
    Invalid(#[from] ValidationError),
}

impl ScenarioError {
    pub fn path(&self) -> &str {
        match self {
            ScenarioError::Malformed { path, .. } => path,
            ScenarioError::Invalid(v) => &v.path,
        }
    }

    pub fn rule(&self) -> &str {
        match self {
            ScenarioError::Malformed { message, .. } => message,
            ScenarioError::Invalid(v) => &v.rule,
        }
    }
}

type Xy = [f64; 2];

fn point(p: Xy) -> Point2 {
    Point2::new(p[0], p[1])
}

fn xy(p: Point2) -> Xy {
    [p.x, p.y]
}

/// Degrees that convert back to exactly `rad`, when such a value lies within
/// a few ulps of the plain conversion.
fn degrees(rad: f64) -> f64 {
    let d = rad.to_degrees();
    let (mut up, mut down) = (d, d);
    for _ in 0..8 {
        if up.to_radians() == rad {
            return up;
        }
        if down.to_radians() == rad {
            return down;
        }
        up = up.next_up();
        down = down.next_down();
    }
    d
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub version: u32,
    pub robot: RobotFile,
    pub goals: Vec<GoalFile>,
    #[serde(default)]
    pub observers: Vec<ObserverFile>,
    #[serde(default)]
    pub obstacles: Vec<ObstacleFile>,
    #[serde(default)]
    pub planner: PlannerFile,
    #[serde(default)]
    pub legibility: LegibilityFile,
    #[serde(default)]
    pub task_weights: TaskWeightsFile,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RobotFile {
    pub position: Xy,
    #[serde(default)]
    pub heading_deg: f64,
    #[serde(default)]
    pub speed: f64,
    #[serde(default = "RobotFile::default_radius")]
    pub radius: f64,
    #[serde(default = "RobotFile::default_v_max")]
    pub v_max: f64,
    #[serde(default = "RobotFile::default_a_max")]
    pub a_max: f64,
    #[serde(default = "RobotFile::default_omega_max_deg")]
    pub omega_max_deg: f64,
}

impl RobotFile {
    fn default_radius() -> f64 {
        0.25
    }
    fn default_v_max() -> f64 {
        1.0
    }
    fn default_a_max() -> f64 {
        1.0
    }
    fn default_omega_max_deg() -> f64 {
        90.0
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoalFile {
    pub id: String,
    pub position: Xy,
    #[serde(default)]
    pub is_target: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObserverFile {
    pub id: String,
    pub position: Xy,
    pub heading_deg: f64,
    #[serde(default = "ObserverFile::default_fov_deg")]
    pub fov_deg: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attached_goal: Option<String>,
}

impl ObserverFile {
    fn default_fov_deg() -> f64 {
        120.0
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "lowercase")]
pub enum ObstacleFile {
    Circle(CircleFile),
    Rect(RectFile),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleFile {
    pub center: Xy,
    pub radius: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RectFile {
    pub min: Xy,
    pub max: Xy,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "lowercase")]
pub enum ModeFile {
    Baseline,
    #[default]
    Legible,
}

impl From<ModeFile> for Mode {
    fn from(m: ModeFile) -> Self {
        match m {
            ModeFile::Baseline => Mode::Baseline,
            ModeFile::Legible => Mode::Legible,
        }
    }
}

impl From<Mode> for ModeFile {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Baseline => ModeFile::Baseline,
            Mode::Legible => ModeFile::Legible,
        }
    }
}

/// Planner section; absent fields take the defaults of
/// [`PlannerParams::defaults_for`].
#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlannerFile {
    pub dt: Option<f64>,
    pub horizon_w: Option<usize>,
    pub mode: Option<ModeFile>,
    pub cem_population: Option<usize>,
    pub cem_elites: Option<usize>,
    pub cem_iterations: Option<usize>,
    pub cem_init_std_v: Option<f64>,
    pub cem_init_std_omega_deg: Option<f64>,
    pub execute_steps: Option<usize>,
    pub goal_tolerance: Option<f64>,
    pub max_cycles: Option<usize>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LegibilityFile {
    pub lambda_sim: Option<f64>,
    pub lambda_fov: Option<f64>,
    pub h_max: Option<f64>,
    pub eps_v: Option<f64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskWeightsFile {
    pub w_goal: Option<f64>,
    pub w_clearance: Option<f64>,
    pub w_approach: Option<f64>,
    pub w_smooth: Option<f64>,
    pub w_speed: Option<f64>,
    pub d_safe: Option<f64>,
    pub v_pref: Option<f64>,
}

impl ScenarioFile {
    /// Applies defaults and converts to the internal model, without
    /// validation.
    pub fn into_spec(self) -> Result<ScenarioSpec, ScenarioError> {
        if self.version != SCHEMA_VERSION {
            return Err(ScenarioError::Malformed {
                path: "version".into(),
                message: format!("unsupported schema version {} (expected {SCHEMA_VERSION})", self.version),
            });
        }
        let r = self.robot;
        let robot = RobotState {
            position: point(r.position),
            heading: wrap_angle(r.heading_deg.to_radians()),
            speed: r.speed,
            radius: r.radius,
            v_max: r.v_max,
            a_max: r.a_max,
            omega_max: r.omega_max_deg.to_radians(),
        };

        let pd = PlannerParams::defaults_for(&robot);
        let p = self.planner;
        let planner = PlannerParams {
            dt: p.dt.unwrap_or(pd.dt),
            horizon_w: p.horizon_w.unwrap_or(pd.horizon_w),
            mode: p.mode.map(Mode::from).unwrap_or(pd.mode),
            cem_population: p.cem_population.unwrap_or(pd.cem_population),
            cem_elites: p.cem_elites.unwrap_or(pd.cem_elites),
            cem_iterations: p.cem_iterations.unwrap_or(pd.cem_iterations),
            cem_init_std: ControlStd {
                v: p.cem_init_std_v.unwrap_or(pd.cem_init_std.v),
                omega: p
                    .cem_init_std_omega_deg
                    .map(f64::to_radians)
                    .unwrap_or(pd.cem_init_std.omega),
            },
            execute_steps: p.execute_steps.unwrap_or(pd.execute_steps),
            goal_tolerance: p.goal_tolerance.unwrap_or(pd.goal_tolerance),
            max_cycles: p.max_cycles.unwrap_or(pd.max_cycles),
        };

        let ld = LegibilityParams::default();
        let l = self.legibility;
        let legibility = LegibilityParams {
            lambda_sim: l.lambda_sim.unwrap_or(ld.lambda_sim),
            lambda_fov: l.lambda_fov.unwrap_or(ld.lambda_fov),
            h_max: l.h_max.unwrap_or(ld.h_max),
            eps_v: l.eps_v.unwrap_or(ld.eps_v),
        };

        let wd = TaskCostWeights::defaults_for(&robot);
        let w = self.task_weights;
        let task_weights = TaskCostWeights {
            w_goal: w.w_goal.unwrap_or(wd.w_goal),
            w_clearance: w.w_clearance.unwrap_or(wd.w_clearance),
            w_approach: w.w_approach.unwrap_or(wd.w_approach),
            w_smooth: w.w_smooth.unwrap_or(wd.w_smooth),
            w_speed: w.w_speed.unwrap_or(wd.w_speed),
            d_safe: w.d_safe.unwrap_or(wd.d_safe),
            v_pref: w.v_pref.unwrap_or(wd.v_pref),
        };

        Ok(ScenarioSpec {
            robot,
            goals: self
                .goals
                .into_iter()
                .map(|g| Goal::new(g.id, point(g.position), g.is_target))
                .collect(),
            observers: self
                .observers
                .into_iter()
                .map(|o| ObserverState {
                    id: o.id,
                    position: point(o.position),
                    heading: wrap_angle(o.heading_deg.to_radians()),
                    fov: o.fov_deg.to_radians(),
                    attached_goal: o.attached_goal,
                })
                .collect(),
            obstacles: self
                .obstacles
                .into_iter()
                .map(|o| match o {
                    ObstacleFile::Circle(c) => Obstacle::Circle {
                        center: point(c.center),
                        radius: c.radius,
                    },
                    ObstacleFile::Rect(r) => Obstacle::Rect {
                        min: point(r.min),
                        max: point(r.max),
                    },
                })
                .collect(),
            planner,
            task_weights,
            legibility,
            seed: self.seed,
        })
    }

    /// The file form of `spec`, with every field written out.
    pub fn from_spec(spec: &ScenarioSpec) -> Self {
        let r = &spec.robot;
        let p = &spec.planner;
        let l = &spec.legibility;
        let w = &spec.task_weights;
        ScenarioFile {
            version: SCHEMA_VERSION,
            robot: RobotFile {
                position: xy(r.position),
                heading_deg: degrees(r.heading),
                speed: r.speed,
                radius: r.radius,
                v_max: r.v_max,
                a_max: r.a_max,
                omega_max_deg: degrees(r.omega_max),
            },
            goals: spec
                .goals
                .iter()
                .map(|g| GoalFile {
                    id: g.id.clone(),
                    position: xy(g.position),
                    is_target: g.is_target,
                })
                .collect(),
            observers: spec
                .observers
                .iter()
                .map(|o| ObserverFile {
                    id: o.id.clone(),
                    position: xy(o.position),
                    heading_deg: degrees(o.heading),
                    fov_deg: degrees(o.fov),
                    attached_goal: o.attached_goal.clone(),
                })
                .collect(),
            obstacles: spec
                .obstacles
                .iter()
                .map(|o| match *o {
                    Obstacle::Circle { center, radius } => ObstacleFile::Circle(CircleFile {
                        center: xy(center),
                        radius,
                    }),
                    Obstacle::Rect { min, max } => ObstacleFile::Rect(RectFile {
                        min: xy(min),
                        max: xy(max),
                    }),
                })
                .collect(),
            planner: PlannerFile {
                dt: Some(p.dt),
                horizon_w: Some(p.horizon_w),
                mode: Some(p.mode.into()),
                cem_population: Some(p.cem_population),
                cem_elites: Some(p.cem_elites),
                cem_iterations: Some(p.cem_iterations),
                cem_init_std_v: Some(p.cem_init_std.v),
                cem_init_std_omega_deg: Some(degrees(p.cem_init_std.omega)),
                execute_steps: Some(p.execute_steps),
                goal_tolerance: Some(p.goal_tolerance),
                max_cycles: Some(p.max_cycles),
            },
            legibility: LegibilityFile {
                lambda_sim: Some(l.lambda_sim),
                lambda_fov: Some(l.lambda_fov),
                h_max: Some(l.h_max),
                eps_v: Some(l.eps_v),
            },
            task_weights: TaskWeightsFile {
                w_goal: Some(w.w_goal),
                w_clearance: Some(w.w_clearance),
                w_approach: Some(w.w_approach),
                w_smooth: Some(w.w_smooth),
                w_speed: Some(w.w_speed),
                d_safe: Some(w.d_safe),
                v_pref: Some(w.v_pref),
            },
            seed: spec.seed,
        }
    }
}

/// Parses and validates a scenario document.
pub fn parse_scenario(bytes: &[u8]) -> Result<ScenarioSpec, ScenarioError> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    let file: ScenarioFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        ScenarioError::Malformed {
            path: if path == "." { String::new() } else { path },
            message: e.into_inner().to_string(),
        }
    })?;
    let spec = file.into_spec()?;
    spec.validate()?;
    Ok(spec)
}

/// Pretty-printed scenario document for `spec`.
pub fn serialize_scenario(spec: &ScenarioSpec) -> String {
    let mut s = serde_json::to_string_pretty(&ScenarioFile::from_spec(spec)).expect("scenario serializes");
    s.push('\n');
    s
}
