//! The calculi shipped with the crate.

use alloc::string::ToString;

use crate::error::{Error, Result};
use crate::signature::{parse_presentation, Presentation};

pub const NAMES: [&str; 7] =
    ["mon", "mon-tree", "ski", "ski-arrow", "rhopi", "rhopi-metered", "group-action"];

/// DSL source of a builtin calculus.
pub fn source(name: &str) -> Option<&'static str> {
    Some(match name {
        "mon" => include_str!("../fixtures/mon.calc"),
        "mon-tree" => include_str!("../fixtures/mon-tree.calc"),
        "ski" => include_str!("../fixtures/ski.calc"),
        "ski-arrow" => include_str!("../fixtures/ski-arrow.calc"),
        "rhopi" => include_str!("../fixtures/rhopi.calc"),
        "rhopi-metered" => include_str!("../fixtures/rhopi-metered.calc"),
        "group-action" => include_str!("../fixtures/group-action.calc"),
        _ => return None,
    })
}

pub fn builtin(name: &str) -> Result<Presentation> {
    let src = source(name).ok_or_else(|| Error::UnknownBuiltin(name.to_string()))?;
    parse_presentation(src)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_builtin_parses() {
        for name in NAMES {
            builtin(name).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn unknown_builtin() {
        assert_eq!(builtin("lambda"), Err(Error::UnknownBuiltin("lambda".into())));
    }

    #[test]
    fn rhopi_par_is_assoc_comm_with_unit() {
        let p = builtin("rhopi").unwrap();
        let par = p.op(p.op_id("|").unwrap());
        assert!(par.attrs.assoc_comm);
        assert_eq!(par.attrs.unit, p.op_id("0"));
        assert!(p.rule("chi").is_some());
        assert_eq!(p.equations.len(), 1);
    }

    #[test]
    fn group_action_is_multisorted_without_rules() {
        let p = builtin("group-action").unwrap();
        assert_eq!(p.sorts.len(), 2);
        assert!(p.rules.is_empty());
        let a = p.op(p.op_id("a").unwrap());
        assert_eq!(a.result, p.sort_id("V").unwrap());
    }
}
