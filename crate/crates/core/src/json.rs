//! File formats. Edges and vertices appear as gram strings; maps are sorted,
//! so serializing the same value always gives the same bytes.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use serde_json::Number;

use crate::codebook::{CodeSizeReport, LengthBounds, SizeEntry};
use crate::error::{Error, Result};
use crate::frame::{EncodingFrame, TieBreakMode};
use crate::graph::{DeBruijnGraph, Edge};
use crate::params::{Alphabet, CodeParams};
use crate::ranking::Ranking;
use crate::weights::WeightMap;

fn is_false(b: &bool) -> bool {
    !*b
}

/// Parameters as they appear at the top of every document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsJson {
    pub q: usize,
    pub l: usize,
    /// Only written for non-default alphabets.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<String>,
}

impl ParamsJson {
    pub fn from_params(p: &CodeParams) -> Self {
        ParamsJson {
            q: p.q(),
            l: p.ell(),
            alphabet: (!p.alphabet().is_default()).then(|| p.alphabet().symbols().iter().collect()),
        }
    }

    pub fn to_params(&self) -> Result<CodeParams> {
        match &self.alphabet {
            None => CodeParams::new(self.q, self.l),
            Some(s) => {
                let a = Alphabet::new(s.chars())?;
                if a.len() != self.q {
                    return Err(Error::Format(format!(
                        "alphabet {s:?} has {} symbols but q = {}",
                        a.len(),
                        self.q
                    )));
                }
                CodeParams::with_alphabet(a, self.l)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameJson {
    #[serde(flatten)]
    pub params: ParamsJson,
    pub alpha: String,
    pub euler: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tie_break: Option<String>,
}

impl FrameJson {
    pub fn from_frame(f: &EncodingFrame) -> Self {
        FrameJson {
            params: ParamsJson::from_params(f.params()),
            alpha: f.alpha_string(),
            euler: f.euler_string(),
            tie_break: (f.mode() != TieBreakMode::default()).then(|| f.mode().name().to_string()),
        }
    }

    pub fn to_frame(&self) -> Result<EncodingFrame> {
        let mode = match &self.tie_break {
            None => TieBreakMode::default(),
            Some(s) => TieBreakMode::parse(s)?,
        };
        EncodingFrame::from_strings(&self.params.to_params()?, &self.alpha, &self.euler, mode)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankingJson {
    #[serde(flatten)]
    pub params: ParamsJson,
    pub ranks: BTreeMap<String, usize>,
    /// Final ranks of the self-loops, for the modes that place them apart.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loops: Option<BTreeMap<String, usize>>,
}

impl RankingJson {
    pub fn new(params: &CodeParams, ranks: &Ranking, loops: Option<&BTreeMap<Edge, usize>>) -> Self {
        let g = DeBruijnGraph::new(params.clone());
        RankingJson {
            params: ParamsJson::from_params(params),
            ranks: ranks.to_grams(&g),
            loops: loops.map(|l| l.iter().map(|(&e, &r)| (g.edge_gram(e), r)).collect()),
        }
    }

    pub fn ranking(&self, g: &DeBruijnGraph) -> Result<Ranking> {
        Ranking::from_grams(g, &self.ranks)
    }

    pub fn loop_ranks(&self, g: &DeBruijnGraph) -> Result<Option<BTreeMap<Edge, usize>>> {
        self.loops
            .as_ref()
            .map(|l| {
                l.iter()
                    .map(|(gram, &r)| Ok((g.parse_edge(gram)?, r)))
                    .collect()
            })
            .transpose()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileJson {
    #[serde(flatten)]
    pub params: ParamsJson,
    pub counts: BTreeMap<String, Number>,
    /// The frame and mode that produced this profile, when it came from an
    /// encoder.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<FrameJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
}

pub fn big_number(n: &BigInt) -> Number {
    Number::from_str(&n.to_string()).expect("integers are valid JSON numbers")
}

pub fn parse_big(n: &Number) -> Result<BigInt> {
    BigInt::from_str(&n.to_string())
        .map_err(|_| Error::Format(format!("{n} is not an integer")))
}

impl ProfileJson {
    pub fn new(x: &WeightMap) -> Result<Self> {
        let counts = x
            .to_gram_map()
            .ok_or_else(|| Error::Format("profile vectors must be integral".into()))?
            .iter()
            .map(|(k, v)| (k.clone(), big_number(v)))
            .collect();
        Ok(ProfileJson {
            params: ParamsJson::from_params(x.params()),
            counts,
            frame: None,
            mode: None,
        })
    }

    pub fn with_origin(mut self, frame: &EncodingFrame, mode: &str) -> Self {
        self.frame = Some(FrameJson::from_frame(frame));
        self.mode = Some(mode.to_string());
        self
    }

    /// Negative counts are rejected; zero counts are kept so that callers
    /// can report them precisely.
    pub fn to_weights(&self) -> Result<WeightMap> {
        let params = self.params.to_params()?;
        let mut counts = BTreeMap::new();
        for (gram, n) in &self.counts {
            let v = parse_big(n)?;
            if v.is_negative() {
                return Err(Error::Format(format!("count of {gram} is negative")));
            }
            counts.insert(gram.clone(), v);
        }
        WeightMap::from_grams(&params, &counts)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SizeEntryJson {
    pub size: Number,
    pub rate: Option<String>,
    pub rate_interval: [f64; 2],
    #[serde(skip_serializing_if = "is_false")]
    pub reference_only: bool,
}

impl From<&SizeEntry> for SizeEntryJson {
    fn from(e: &SizeEntry) -> Self {
        SizeEntryJson {
            size: big_number(&e.size.clone().into()),
            rate: e.rate.render(3),
            rate_interval: [e.rate.lower, e.rate.upper],
            reference_only: e.reference_only,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsJson {
    pub upper: Number,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reverse_edge_upper: Option<Number>,
    pub path_weight: Number,
    pub lower: Number,
    pub max_systematic_k: usize,
}

impl From<&LengthBounds> for BoundsJson {
    fn from(b: &LengthBounds) -> Self {
        BoundsJson {
            upper: big_number(&b.upper),
            reverse_edge_upper: b.reverse_edge_upper.as_ref().map(big_number),
            path_weight: big_number(&b.path_weight),
            lower: big_number(&b.lower),
            max_systematic_k: b.max_systematic_k,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SizesJson {
    pub q: usize,
    pub l: usize,
    pub sizes: BTreeMap<&'static str, SizeEntryJson>,
    pub bounds: BoundsJson,
}

impl SizesJson {
    pub fn new(r: &CodeSizeReport, b: &LengthBounds) -> Self {
        let mut sizes = BTreeMap::new();
        sizes.insert("systematic", (&r.systematic).into());
        sizes.insert("selfloop", (&r.selfloop).into());
        sizes.insert("firstnode", (&r.firstnode).into());
        sizes.insert("prior_work", (&r.prior_work).into());
        if let Some(e) = &r.allnodes_reference {
            sizes.insert("allnodes_reference", e.into());
        }
        if let Some(e) = &r.total_feasible_reference {
            sizes.insert("total_feasible_reference", e.into());
        }
        SizesJson {
            q: r.q,
            l: r.ell,
            sizes,
            bounds: b.into(),
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("in-memory serialization cannot fail");
    s.push('\n');
    s
}

pub fn from_json_str<'a, T: Deserialize<'a>>(s: &'a str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worked_frame() -> EncodingFrame {
        EncodingFrame::from_strings(
            &CodeParams::new(4, 2).unwrap(),
            "AGTC",
            "AGTCAACCTTATGGCG",
            TieBreakMode::FirstOccurrence,
        )
        .unwrap()
    }

    #[test]
    fn frame_round_trip() {
        let f = worked_frame();
        let j = FrameJson::from_frame(&f);
        let s = to_json_string(&j);
        assert!(s.contains("\"alpha\": \"AGTC\""));
        assert!(!s.contains("alphabet"));
        let back: FrameJson = from_json_str(&s).unwrap();
        assert_eq!(back.to_frame().unwrap(), f);
    }

    #[test]
    fn minimal_frame_document() {
        let j: FrameJson =
            from_json_str(r#"{"q":4,"l":2,"alpha":"AGTC","euler":"AGTCAACCTTATGGCG"}"#).unwrap();
        assert_eq!(j.to_frame().unwrap(), worked_frame());
    }

    #[test]
    fn profile_round_trip_with_big_counts() {
        let p = CodeParams::new(3, 2).unwrap();
        let big: BigInt = BigInt::from(10).pow(40);
        let w: Vec<BigInt> = (1..=9).map(|k| &big + k).collect();
        let x = WeightMap::from_integers(&p, w).unwrap();
        let s = to_json_string(&ProfileJson::new(&x).unwrap());
        assert!(s.contains("10000000000000000000000000000000000000001"));
        let back: ProfileJson = from_json_str(&s).unwrap();
        assert_eq!(back.to_weights().unwrap(), x);
        // Byte-stable.
        assert_eq!(s, to_json_string(&back));
    }

    #[test]
    fn bad_documents() {
        let neg: ProfileJson = from_json_str(r#"{"q":3,"l":2,"counts":{"AA":-1}}"#).unwrap();
        assert!(neg.to_weights().is_err());
        let frac: ProfileJson = from_json_str(r#"{"q":3,"l":2,"counts":{"AA":1.5}}"#).unwrap();
        assert!(frac.to_weights().is_err());
        let missing: ProfileJson = from_json_str(r#"{"q":3,"l":2,"counts":{"AA":1}}"#).unwrap();
        assert!(matches!(missing.to_weights(), Err(Error::MissingWeight(_))));
        assert!(from_json_str::<RankingJson>("{").is_err());
        let alpha = ParamsJson { q: 3, l: 2, alphabet: Some("XY".into()) };
        assert!(alpha.to_params().is_err());
    }

    #[test]
    fn custom_alphabet_is_written() {
        let p = CodeParams::with_alphabet(Alphabet::new("01x".chars()).unwrap(), 2).unwrap();
        let j = ParamsJson::from_params(&p);
        assert_eq!(j.alphabet.as_deref(), Some("01x"));
        assert_eq!(j.to_params().unwrap(), p);
    }
}
