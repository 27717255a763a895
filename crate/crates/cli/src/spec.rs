//! Group spec strings such as `pn-rp2:n=4` or `gamma-rp2:m=2,p=2`.

use std::collections::BTreeMap;
use std::str::FromStr;

use surface_braids::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    PnRp2 { n: usize },
    GammaRp2 { m: usize, p: usize },
    GammaS2 { n: usize, m: usize },
    Ln { n: usize },
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::GroupSpec(s.to_string());
        let (family, rest) = s.split_once(':').ok_or_else(bad)?;
        let mut params = BTreeMap::new();
        for kv in rest.split(',') {
            let (k, v) = kv.split_once('=').ok_or_else(bad)?;
            let v: usize = v.trim().parse().map_err(|_| bad())?;
            if params.insert(k.trim(), v).is_some() {
                return Err(bad());
            }
        }
        let mut take = |key: &str| params.remove(key).ok_or_else(bad);
        let spec = match family.trim() {
            "pn-rp2" => GroupSpec::PnRp2 { n: take("n")? },
            "gamma-rp2" => GroupSpec::GammaRp2 {
                m: take("m")?,
                p: take("p")?,
            },
            "gamma-s2" => GroupSpec::GammaS2 {
                n: take("n")?,
                m: take("m")?,
            },
            "ln" => GroupSpec::Ln { n: take("n")? },
            _ => return Err(bad()),
        };
        if !params.is_empty() {
            return Err(bad());
        }
        Ok(spec)
    }
}
