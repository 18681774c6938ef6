//! Model documents and round-trace files.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::boosters::{RoundTrace, TrainedModel};
use crate::error::{Error, Result};

pub const MODEL_FORMAT: &str = "poeboost-model";
pub const MODEL_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ModelDocument<M> {
    format: String,
    version: u32,
    model: M,
}

pub fn model_to_json(model: &TrainedModel) -> Result<String> {
    let doc = ModelDocument {
        format: MODEL_FORMAT.to_string(),
        version: MODEL_VERSION,
        model,
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

pub fn model_from_json(text: &str) -> Result<TrainedModel> {
    let doc: ModelDocument<serde_json::Value> = serde_json::from_str(text)?;
    if doc.format != MODEL_FORMAT {
        return Err(Error::Model(format!("unknown format {:?}", doc.format)));
    }
    if doc.version != MODEL_VERSION {
        return Err(Error::Model(format!("unsupported version {}", doc.version)));
    }
    Ok(serde_json::from_value(doc.model)?)
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn save_model(model: &TrainedModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut text = model_to_json(model)?;
    text.push('\n');
    std::fs::write(path, text).map_err(io_error(path))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<TrainedModel> {
    let path = path.as_ref();
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(io_error(path))?;
    model_from_json(&text)
}

pub const TRACE_HEADER: [&str; 4] = ["round", "epsilon", "alpha_or_pe", "train_loglik"];

/// Writes `round,epsilon,alpha_or_pe,train_loglik` rows; an empty trace
/// gives a header-only file.
pub fn write_traces<W: Write>(traces: &[RoundTrace], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRACE_HEADER)?;
    for t in traces {
        w.write_record([
            t.round.to_string(),
            t.epsilon.to_string(),
            t.alpha_or_p_e.to_string(),
            t.train_loglik.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

pub fn write_trace_csv(traces: &[RoundTrace], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(io_error(path))?;
    write_traces(traces, BufWriter::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace(round: usize) -> RoundTrace {
        RoundTrace {
            round,
            epsilon: 0.25,
            alpha_or_p_e: 0.1 * round as f64,
            train_loglik: -1.5,
        }
    }

    #[test]
    fn trace_rows() {
        let mut buf = Vec::new();
        write_traces(&[trace(1), trace(2), trace(3)], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "round,epsilon,alpha_or_pe,train_loglik");
        assert_eq!(lines[1], "1,0.25,0.1,-1.5");
    }

    #[test]
    fn empty_trace_is_header_only() {
        let mut buf = Vec::new();
        write_traces(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "round,epsilon,alpha_or_pe,train_loglik\n");
    }

    #[test]
    fn rejects_foreign_documents() {
        assert!(matches!(
            model_from_json(r#"{"format":"other","version":1,"model":null}"#),
            Err(Error::Model(_))
        ));
        assert!(model_from_json("{").is_err());
    }
}
