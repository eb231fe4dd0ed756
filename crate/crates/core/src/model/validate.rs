use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_traits::Zero;

use super::spec::{in_unit_interval, JointId, LinkageSpec, Tracer};

/// One named invariant and whether it holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    /// Grübler count before the driver is fixed.
    pub mobility: i64,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            if c.detail.is_empty() {
                writeln!(f, "{mark} {}", c.name)?;
            } else {
                writeln!(f, "{mark} {}: {}", c.name, c.detail)?;
            }
        }
        Ok(())
    }
}

struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, name: &'static str, problems: Vec<String>) {
        self.0.push(Check {
            name,
            passed: problems.is_empty(),
            detail: problems.join("; "),
        });
    }
}

pub fn validate(spec: &LinkageSpec) -> ValidationReport {
    let mut out = Checks(Vec::new());

    let mut problems = Vec::new();
    let mut seen = BTreeSet::new();
    for j in &spec.joints {
        if !seen.insert(j.id.as_str()) {
            problems.push(format!("joint {} declared twice", j.id));
        }
    }
    let mut seen = BTreeSet::new();
    for b in &spec.bars {
        if !seen.insert(b.id.as_str()) {
            problems.push(format!("bar {} declared twice", b.id));
        }
    }
    out.push("unique-ids", problems);

    let mut problems = Vec::new();
    for b in &spec.bars {
        for end in [&b.a, &b.b] {
            if spec.joint(end).is_none() {
                problems.push(format!("bar {} uses unknown joint {}", b.id, end));
            }
        }
        if b.a == b.b {
            problems.push(format!("bar {} has both ends at {}", b.id, b.a));
        }
    }
    for j in &spec.joints {
        if let Some(h) = &j.hole {
            match spec.bar(&h.bar) {
                None => problems.push(format!("joint {} rides on unknown bar {}", j.id, h.bar)),
                Some(b) if b.a == j.id || b.b == j.id => {
                    problems.push(format!("joint {} is an end of its host bar {}", j.id, b.id))
                }
                Some(_) => {}
            }
            if !in_unit_interval(&h.offset) {
                problems.push(format!("joint {} offset {} outside [0, 1]", j.id, h.offset));
            }
        }
    }
    out.push("references", problems);

    let problems = spec
        .bars
        .iter()
        .filter(|b| b.length <= Zero::zero())
        .map(|b| format!("bar {} has length {}", b.id, b.length))
        .collect();
    out.push("positive-lengths", problems);

    let problems = if spec.anchors().next().is_none() {
        vec!["no anchored joint".to_string()]
    } else {
        Vec::new()
    };
    out.push("anchored", problems);

    out.push("connected", connectivity_problems(spec));

    let mobility = spec.mobility();
    let problems = if mobility == 1 {
        Vec::new()
    } else {
        vec![format!(
            "{mobility} degrees of freedom before driving, need 1"
        )]
    };
    out.push("one-dof", problems);

    let mut problems = Vec::new();
    match spec.bar(&spec.driver.bar) {
        None => problems.push(format!("driver bar {} not found", spec.driver.bar)),
        Some(b) => {
            let anchored = |id: &JointId| spec.joint(id).map(|j| j.is_anchored()).unwrap_or(false);
            let n = anchored(&b.a) as u8 + anchored(&b.b) as u8;
            if n != 1 {
                problems.push(format!("driver bar {} has {n} anchored ends, need 1", b.id));
            }
        }
    }
    out.push("driver", problems);

    let mut problems = Vec::new();
    match &spec.tracer {
        Tracer::Joint(id) => {
            if spec.joint(id).is_none() {
                problems.push(format!("tracer joint {id} not found"));
            }
        }
        Tracer::OnBar { bar, offset } => {
            if spec.bar(bar).is_none() {
                problems.push(format!("tracer bar {bar} not found"));
            }
            if !in_unit_interval(offset) {
                problems.push(format!("tracer offset {offset} outside [0, 1]"));
            }
        }
    }
    out.push("tracer", problems);

    ValidationReport {
        checks: out.0,
        mobility,
    }
}

/// Joints are nodes; bars and hole attachments are edges.
fn connectivity_problems(spec: &LinkageSpec) -> Vec<String> {
    if spec.joints.is_empty() {
        return vec!["no joints".to_string()];
    }
    let index: HashMap<&str, usize> = spec
        .joints
        .iter()
        .enumerate()
        .map(|(i, j)| (j.id.as_str(), i))
        .collect();
    let mut parent: Vec<usize> = (0..spec.joints.len()).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut join = |a: &str, b: &str| {
        if let (Some(&i), Some(&k)) = (index.get(a), index.get(b)) {
            let (ri, rk) = (root(&mut parent, i), root(&mut parent, k));
            parent[ri] = rk;
        }
    };
    for b in &spec.bars {
        join(b.a.as_str(), b.b.as_str());
    }
    for j in &spec.joints {
        if let Some(b) = j.hole.as_ref().and_then(|h| spec.bar(&h.bar)) {
            join(j.id.as_str(), b.a.as_str());
        }
    }
    let r0 = root(&mut parent, 0);
    let stray: Vec<String> = (0..spec.joints.len())
        .filter(|&i| root(&mut parent, i) != r0)
        .map(|i| spec.joints[i].id.to_string())
        .collect();
    if stray.is_empty() {
        Vec::new()
    } else {
        vec![format!(
            "joints not connected to {}: {}",
            spec.joints[0].id,
            stray.join(", ")
        )]
    }
}
