//! Minimal JSON emitter with deterministic output: object fields keep
//! insertion order, floats always render as 17-significant-digit scientific
//! notation, and big integers/rationals render as decimal strings. Identical
//! inputs therefore produce byte-identical documents.

use std::fmt::Write;

use num_traits::Signed;
use subseq::logspace::LogReal;
use subseq::{BigCount, ExactRational};

pub enum Json {
    Null,
    Bool(bool),
    UInt(u128),
    Float(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(&'static str, Json)>),
}

impl Json {
    pub fn render(&self, out: &mut String) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::UInt(u) => {
                let _ = write!(out, "{u}");
            }
            Json::Float(f) => {
                debug_assert!(f.is_finite(), "only finite floats are emitted");
                let _ = write!(out, "{f:.16e}");
            }
            Json::Str(s) => escape_into(s, out),
            Json::Arr(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    item.render(out);
                }
                out.push(']');
            }
            Json::Obj(fields) => {
                out.push('{');
                for (i, (key, value)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    escape_into(key, out);
                    out.push(':');
                    value.render(out);
                }
                out.push('}');
            }
        }
    }

    pub fn to_document(&self) -> String {
        let mut out = String::new();
        self.render(&mut out);
        out
    }
}

fn escape_into(s: &str, out: &mut String) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

/// `{"num": "...", "den": "..."}` with both parts as decimal strings.
pub fn rational(r: &ExactRational) -> Json {
    debug_assert!(!r.denom().is_negative());
    Json::Obj(vec![
        ("num", Json::Str(r.numer().to_string())),
        ("den", Json::Str(r.denom().to_string())),
    ])
}

/// Big counts as decimal strings — never floats, no matter the magnitude.
pub fn big(b: &BigCount) -> Json {
    Json::Str(b.to_string())
}

/// `{"sign": 0|1, "ln": null|float}` — sign 0 encodes exact zero.
pub fn log_real(v: LogReal) -> Json {
    match v.ln() {
        Some(ln) => Json::Obj(vec![("sign", Json::UInt(1)), ("ln", Json::Float(ln))]),
        None => Json::Obj(vec![("sign", Json::UInt(0)), ("ln", Json::Null)]),
    }
}

/// Top-level document: command name, tool version, echoed inputs, payload.
pub fn envelope(command: &'static str, inputs: Json, result: Json) -> Json {
    Json::Obj(vec![
        ("command", Json::Str(command.to_string())),
        ("version", Json::Str(env!("CARGO_PKG_VERSION").to_string())),
        ("inputs", inputs),
        ("result", result),
    ])
}
