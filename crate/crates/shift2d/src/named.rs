//! Named shifts accepted by `check --named`.

use std::path::Path;

use shift2d_core::shift_model::{
    build_axy, build_drury_arveson, build_embedding, build_ex215, build_ex216, build_helton_howe, ModelError,
};
use shift2d_core::WeightDiagram;
use thiserror::Error;

use crate::weights_file::{load_embedding, LoadError};

/// Core side used for the Drury–Arveson shift; its formula tail covers the rest.
pub const DRURY_ARVESON_DEPTH: usize = 8;

pub const NAMES: &str = "drury-arveson, helton-howe, ex215:A,B, ex216:A,B, axy:A,X,Y, embed:FILE";

#[derive(Debug, Error)]
pub enum NamedError {
    #[error("unknown shift {0:?}; known: {NAMES}")]
    Unknown(String),
    #[error("{name}: {detail}")]
    BadArgs { name: String, detail: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Load(#[from] LoadError),
}

fn numbers(name: &str, args: &str, count: usize) -> Result<Vec<f64>, NamedError> {
    let bad = |detail: String| NamedError::BadArgs { name: name.to_string(), detail };
    let vals = args
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| bad(format!("{t:?} is not a number"))))
        .collect::<Result<Vec<_>, _>>()?;
    if vals.len() != count {
        return Err(bad(format!("expected {count} comma-separated numbers, got {}", vals.len())));
    }
    Ok(vals)
}

pub fn resolve(spec: &str) -> Result<WeightDiagram, NamedError> {
    let (head, args) = spec.split_once(':').unwrap_or((spec, ""));
    match head {
        "drury-arveson" if args.is_empty() => Ok(build_drury_arveson(DRURY_ARVESON_DEPTH)?),
        "helton-howe" if args.is_empty() => Ok(build_helton_howe()),
        "ex215" => {
            let v = numbers(head, args, 2)?;
            Ok(build_ex215(v[0], v[1])?)
        }
        "ex216" => {
            let v = numbers(head, args, 2)?;
            Ok(build_ex216(v[0], v[1])?)
        }
        "axy" => {
            let v = numbers(head, args, 3)?;
            Ok(build_axy(v[0], v[1], v[2])?)
        }
        "embed" if !args.is_empty() => {
            let e = load_embedding(Path::new(args))?;
            Ok(build_embedding(&e)?.with_name(format!("embed:{args}")))
        }
        _ => Err(NamedError::Unknown(spec.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use shift2d_core::Tail;

    #[test]
    fn resolves_every_builder() {
        assert!(matches!(resolve("drury-arveson").unwrap().tail(), Tail::Formula(_)));
        assert_eq!(resolve("helton-howe").unwrap().name(), "helton-howe");
        assert_eq!(resolve("ex216:1.05,1.05").unwrap().core_dims(), (2, 2));
        assert_eq!(resolve("ex215:0.5,0.8").unwrap().core_dims(), (3, 3));
        assert_eq!(resolve("axy:0.5, 0.6, 0.7").unwrap().core_dims(), (3, 3));
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(matches!(resolve("nope"), Err(NamedError::Unknown(_))));
        assert!(matches!(resolve("ex216:1"), Err(NamedError::BadArgs { .. })));
        assert!(matches!(resolve("ex216:a,b"), Err(NamedError::BadArgs { .. })));
        assert!(matches!(resolve("axy:0.9,0.5,0.9"), Err(NamedError::Model(ModelError::OutOfClass(_)))));
        assert!(matches!(resolve("embed:/no/such/file.json"), Err(NamedError::Load(LoadError::Io { .. }))));
    }
}
