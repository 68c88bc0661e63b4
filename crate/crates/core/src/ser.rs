//! Small serde helpers: rationals and rational vectors serialize as the
//! canonical "p/q" strings used by every JSON surface of the tool.

use serde::ser::SerializeSeq;
use serde::Serializer;

use crate::rat::{format_rat, QVec, Rat};

pub fn rat<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rat(r))
}

pub fn qvec<S: Serializer>(v: &QVec, s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.0.len()))?;
    for x in &v.0 {
        seq.serialize_element(&format_rat(x))?;
    }
    seq.end()
}
