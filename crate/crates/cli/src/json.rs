//! JSON emission with 12-significant-digit floats.
//!
//! serde_json's default float formatting is shortest-roundtrip; golden-file
//! outputs instead pin every float to 12 significant digits, matching the
//! CSV convention.

use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;

struct Sig12Formatter;

impl Formatter for Sig12Formatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{}", qtherm::output::sig12(value))
    }
}

/// Serialize to a compact JSON string with pinned float formatting and a
/// trailing newline.
pub fn to_string<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut buffer = Vec::new();
    let mut serializer = serde_json::Serializer::with_formatter(&mut buffer, Sig12Formatter);
    value.serialize(&mut serializer)?;
    buffer.push(b'\n');
    Ok(String::from_utf8(buffer)?)
}
