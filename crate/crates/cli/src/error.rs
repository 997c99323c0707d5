use pivext::cohomology::CohomologyError;
use pivext::gmodule::GModuleError;
use pivext::group::GroupError;
use pivext::picard::PicardError;
use pivext::pivotal::PivotalError;
use pivext::ty::TyError;
use pivext::GuardError;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("{path}: expected {expected}")]
    Schema { path: String, expected: String },
    #[error("{path}: unknown group {name:?}")]
    UnknownGroup { path: String, name: String },
    #[error(transparent)]
    Guard(GuardError),
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn schema(path: impl Into<String>, expected: impl Into<String>) -> Self {
        CliError::Schema {
            path: path.into(),
            expected: expected.into(),
        }
    }

    pub fn invalid(path: impl Into<String>, message: impl ToString) -> Self {
        CliError::Invalid {
            path: path.into(),
            message: message.to_string(),
        }
    }

    /// 2 for guard violations, 1 for I/O, 3 for everything wrong with the input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Guard(_) => 2,
            CliError::Io(_) => 1,
            _ => 3,
        }
    }

    pub fn to_json(&self) -> Value {
        let body = match self {
            CliError::Schema { path, expected } => json!({"kind": "schema", "path": path, "expected": expected}),
            CliError::UnknownGroup { path, name } => json!({"kind": "unknown_group", "path": path, "name": name}),
            CliError::Guard(g) => json!({"kind": "guard", "what": g.what, "size": g.size, "limit": g.limit}),
            CliError::Invalid { path, message } => json!({"kind": "invalid_input", "path": path, "message": message}),
            CliError::Io(m) => json!({"kind": "io", "message": m}),
        };
        json!({ "error": body })
    }
}

fn group_guard(e: &GroupError) -> Option<GuardError> {
    match e {
        GroupError::TooLarge { order, limit } => Some(GuardError {
            what: "group order".into(),
            size: *order,
            limit: *limit,
        }),
        _ => None,
    }
}

fn module_guard(e: &GModuleError) -> Option<GuardError> {
    match e {
        GModuleError::Group(g) => group_guard(g),
        _ => None,
    }
}

fn cohomology_guard(e: &CohomologyError) -> Option<GuardError> {
    match e {
        CohomologyError::TooLarge(g) => Some(g.clone()),
        _ => None,
    }
}

/// Library errors that may hide a guard violation.
pub trait LibError: std::fmt::Display {
    fn guard(&self) -> Option<GuardError>;
}

impl LibError for GroupError {
    fn guard(&self) -> Option<GuardError> {
        group_guard(self)
    }
}

impl LibError for GModuleError {
    fn guard(&self) -> Option<GuardError> {
        module_guard(self)
    }
}

impl LibError for CohomologyError {
    fn guard(&self) -> Option<GuardError> {
        cohomology_guard(self)
    }
}

impl LibError for PivotalError {
    fn guard(&self) -> Option<GuardError> {
        match self {
            PivotalError::Group(g) => group_guard(g),
            PivotalError::Module(m) => module_guard(m),
            PivotalError::Cohomology(c) => cohomology_guard(c),
            _ => None,
        }
    }
}

impl LibError for PicardError {
    fn guard(&self) -> Option<GuardError> {
        match self {
            PicardError::Group(g) => group_guard(g),
            PicardError::Module(m) => module_guard(m),
            PicardError::Cohomology(c) => cohomology_guard(c),
            PicardError::TooLarge(g) => Some(g.clone()),
            _ => None,
        }
    }
}

impl LibError for TyError {
    fn guard(&self) -> Option<GuardError> {
        match self {
            TyError::Group(g) => group_guard(g),
            TyError::Cohomology(c) => cohomology_guard(c),
            _ => None,
        }
    }
}

/// Wraps a library error, keeping guard violations distinguishable.
pub fn lib<E: LibError>(path: &str) -> impl Fn(E) -> CliError + '_ {
    move |e| match e.guard() {
        Some(g) => CliError::Guard(g),
        None => CliError::invalid(path, e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_and_kinds() {
        let g = CliError::Guard(GuardError {
            what: "x".into(),
            size: 3,
            limit: 2,
        });
        assert_eq!(g.exit_code(), 2);
        assert_eq!(g.to_json()["error"]["kind"], "guard");
        assert_eq!(CliError::schema("$.a", "b").exit_code(), 3);
        assert_eq!(CliError::Io("gone".into()).exit_code(), 1);
        let wrapped = lib::<GroupError>("$.g")(GroupError::TooLarge { order: 70, limit: 64 });
        assert_eq!(wrapped.exit_code(), 2);
    }
}
