//! Keyword-valued flags. They parse from the command line, the environment and the config
//! file alike, so they implement `FromStr`/`Display` rather than a clap-only trait.

use std::fmt;
use std::str::FromStr;

use chemotaxis::galerkin::{ContinuationParameter, MaximisedMode};
use chemotaxis::pde::Scheme;

macro_rules! keyword_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq)]
        pub enum $name { $($variant),+ }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self { $($name::$variant => $text),+ }
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                let s = s.trim();
                $name::ALL
                    .iter()
                    .copied()
                    .find(|k| k.as_str() == s)
                    .or_else(|| $name::ALL.iter().copied().find(|k| k.as_str().eq_ignore_ascii_case(s)))
                    .ok_or_else(|| {
                        let names: Vec<&str> = $name::ALL.iter().map(|k| k.as_str()).collect();
                        format!("`{s}` is not one of {}", names.join(", "))
                    })
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

keyword_enum!(SchemeArg {
    Explicit => "explicit",
    SemiImplicit => "semi-implicit",
});

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Explicit => Scheme::Explicit,
            SchemeArg::SemiImplicit => Scheme::SemiImplicit,
        }
    }
}

keyword_enum!(
    /// Initial condition family for `simulate`.
    IcKind {
        FrontSeed => "front-seed",
        Stimulus => "stimulus",
        Homogeneous => "homogeneous",
    }
);

keyword_enum!(
    /// Model parameters that a stability sweep can vary.
    ModelParam {
        D => "D",
        Chi0 => "chi0",
        R => "r",
        Nu => "nu",
        Nu1 => "nu1",
        Nu2 => "nu2",
        N0 => "n0",
    }
);

impl ModelParam {
    pub fn set(self, m: &mut chemotaxis::ModelSpec, value: f64) {
        match self {
            ModelParam::D => m.d = value,
            ModelParam::Chi0 => m.chi0 = value,
            ModelParam::R => m.r = value,
            ModelParam::Nu => m.nu = Some(value),
            ModelParam::Nu1 => m.nu1 = Some(value),
            ModelParam::Nu2 => m.nu2 = Some(value),
            ModelParam::N0 => m.n0 = Some(value),
        }
    }
}

keyword_enum!(
    /// Parameters that a Galerkin continuation can follow.
    GalerkinParam {
        Length => "L",
        K => "k",
        D => "D",
        Chi0 => "chi0",
        R => "r",
    }
);

impl From<GalerkinParam> for ContinuationParameter {
    fn from(p: GalerkinParam) -> Self {
        match p {
            GalerkinParam::Length => ContinuationParameter::Length,
            GalerkinParam::K => ContinuationParameter::K,
            GalerkinParam::D => ContinuationParameter::D,
            GalerkinParam::Chi0 => ContinuationParameter::Chi0,
            GalerkinParam::R => ContinuationParameter::R,
        }
    }
}

keyword_enum!(Maximise {
    First => "first",
    Second => "second",
});

impl From<Maximise> for MaximisedMode {
    fn from(m: Maximise) -> Self {
        match m {
            Maximise::First => MaximisedMode::First,
            Maximise::Second => MaximisedMode::Second,
        }
    }
}

keyword_enum!(
    /// Figure and table recipes.
    Target {
        Fig1 => "fig1",
        Fig2 => "fig2",
        Fig3 => "fig3",
        Fig4 => "fig4",
        Fig5 => "fig5",
        Table2 => "table2",
        Fig6 => "fig6",
        Fig7 => "fig7",
        All => "all",
    }
);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keywords_round_trip() {
        for t in Target::ALL {
            assert_eq!(t.to_string().parse::<Target>().unwrap(), *t);
        }
        assert_eq!("Semi-Implicit".parse::<SchemeArg>().unwrap(), SchemeArg::SemiImplicit);
        assert_eq!("d".parse::<ModelParam>().unwrap(), ModelParam::D);
        assert!("fig9".parse::<Target>().unwrap_err().contains("fig1"));
    }
}
