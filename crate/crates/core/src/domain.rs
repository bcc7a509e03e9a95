//! Core protocol vocabulary shared by every module: the four polarization
//! states, the two-state encoding sets, ternary key symbols, protocol
//! parameters, the physical channel description, and per-intensity count
//! tables.

use core::fmt;

/// Measurement / preparation basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    /// Rectilinear basis holding `H` and `V`.
    Z,
    /// Diagonal basis holding `+` and `-`.
    X,
}

impl Basis {
    pub const ALL: [Basis; 2] = [Basis::Z, Basis::X];

    /// The two outcome states of this basis, in bit order (`H`/`+` first).
    pub fn states(self) -> [QState; 2] {
        match self {
            Basis::Z => [QState::H, QState::V],
            Basis::X => [QState::Plus, QState::Minus],
        }
    }
}

/// One of the four polarization states. `H`/`V` span the Z basis, `+`/`-`
/// the X basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QState {
    H,
    V,
    Plus,
    Minus,
}

impl QState {
    pub const ALL: [QState; 4] = [QState::H, QState::V, QState::Plus, QState::Minus];

    pub fn basis(self) -> Basis {
        match self {
            QState::H | QState::V => Basis::Z,
            QState::Plus | QState::Minus => Basis::X,
        }
    }

    /// The unique state orthogonal to `self` (`H`↔`V`, `+`↔`-`).
    pub fn orthogonal(self) -> QState {
        match self {
            QState::H => QState::V,
            QState::V => QState::H,
            QState::Plus => QState::Minus,
            QState::Minus => QState::Plus,
        }
    }

    pub fn is_orthogonal_to(self, other: QState) -> bool {
        self.orthogonal() == other
    }

    /// Stable index used for bucketing (`H`=0, `V`=1, `+`=2, `-`=3).
    pub fn index(self) -> usize {
        match self {
            QState::H => 0,
            QState::V => 1,
            QState::Plus => 2,
            QState::Minus => 3,
        }
    }
}

impl fmt::Display for QState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            QState::H => "H",
            QState::V => "V",
            QState::Plus => "+",
            QState::Minus => "-",
        };
        f.write_str(s)
    }
}

/// One of the four ordered two-state encoding sets
/// `{H,+}`, `{+,V}`, `{V,-}`, `{-,H}`.
///
/// The first member of each set encodes bit 0, the second bit 1. Every state
/// appears in exactly two sets, once in each position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SetAssignment {
    HPlus,
    PlusV,
    VMinus,
    MinusH,
}

impl SetAssignment {
    pub const ALL: [SetAssignment; 4] = [
        SetAssignment::HPlus,
        SetAssignment::PlusV,
        SetAssignment::VMinus,
        SetAssignment::MinusH,
    ];

    /// The member encoding bit 0.
    pub fn bit0(self) -> QState {
        match self {
            SetAssignment::HPlus => QState::H,
            SetAssignment::PlusV => QState::Plus,
            SetAssignment::VMinus => QState::V,
            SetAssignment::MinusH => QState::Minus,
        }
    }

    /// The member encoding bit 1.
    pub fn bit1(self) -> QState {
        match self {
            SetAssignment::HPlus => QState::Plus,
            SetAssignment::PlusV => QState::V,
            SetAssignment::VMinus => QState::Minus,
            SetAssignment::MinusH => QState::H,
        }
    }

    pub fn contains(self, state: QState) -> bool {
        self.bit0() == state || self.bit1() == state
    }

    /// A set assignment is valid only for a sent state it contains.
    pub fn valid_for(self, sent: QState) -> bool {
        self.contains(sent)
    }

    /// The two sets containing `state`, in declaration order.
    pub fn sets_for(state: QState) -> [SetAssignment; 2] {
        match state {
            QState::H => [SetAssignment::HPlus, SetAssignment::MinusH],
            QState::Plus => [SetAssignment::HPlus, SetAssignment::PlusV],
            QState::V => [SetAssignment::PlusV, SetAssignment::VMinus],
            QState::Minus => [SetAssignment::VMinus, SetAssignment::MinusH],
        }
    }

    /// The bit this set encodes for `sent`, or `None` if `sent` is not a
    /// member.
    pub fn encoded_bit(self, sent: QState) -> Option<bool> {
        if self.bit0() == sent {
            Some(false)
        } else if self.bit1() == sent {
            Some(true)
        } else {
            None
        }
    }
}

/// Ternary raw-key symbol. `Inconclusive` is a first-class value, never
/// folded into the bits: mismatch rates are defined over conclusive
/// positions only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KeySymbol {
    Zero,
    One,
    Inconclusive,
}

impl KeySymbol {
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            KeySymbol::One
        } else {
            KeySymbol::Zero
        }
    }

    pub fn bit(self) -> Option<bool> {
        match self {
            KeySymbol::Zero => Some(false),
            KeySymbol::One => Some(true),
            KeySymbol::Inconclusive => None,
        }
    }

    pub fn is_conclusive(self) -> bool {
        !matches!(self, KeySymbol::Inconclusive)
    }
}

/// Classifies a measured state against an announced set.
///
/// Returns `Zero` if the outcome is orthogonal to the bit-1 member, `One` if
/// orthogonal to the bit-0 member, and `Inconclusive` otherwise (the outcome
/// equals a member or lies in a basis that cannot discriminate). Total over
/// the 4x4 domain; validity of the set for the originally sent state is
/// deliberately not checked, since a dishonest sender may violate it.
pub fn conclusive_outcome(set: SetAssignment, measured: QState) -> KeySymbol {
    if measured.is_orthogonal_to(set.bit1()) {
        KeySymbol::Zero
    } else if measured.is_orthogonal_to(set.bit0()) {
        KeySymbol::One
    } else {
        KeySymbol::Inconclusive
    }
}

/// Intensity class of an emitted pulse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntensityLabel {
    Signal,
    Decoy,
    Vacuum,
}

impl IntensityLabel {
    pub const ALL: [IntensityLabel; 3] = [
        IntensityLabel::Signal,
        IntensityLabel::Decoy,
        IntensityLabel::Vacuum,
    ];

    pub fn index(self) -> usize {
        match self {
            IntensityLabel::Signal => 0,
            IntensityLabel::Decoy => 1,
            IntensityLabel::Vacuum => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            IntensityLabel::Signal => "mu",
            IntensityLabel::Decoy => "nu",
            IntensityLabel::Vacuum => "vac",
        }
    }
}

/// A labelled mean photon number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Intensity {
    pub label: IntensityLabel,
    pub mean_photons: f64,
}

/// Which receiver a pulse (or count table) belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recipient {
    Bob,
    Charlie,
}

impl Recipient {
    pub fn other(self) -> Recipient {
        match self {
            Recipient::Bob => Recipient::Charlie,
            Recipient::Charlie => Recipient::Bob,
        }
    }
}

/// Free protocol parameters plus the negotiated acceptance thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolParams {
    /// Signal intensity (mean photon number), `mu > nu`.
    pub mu: f64,
    /// Decoy intensity, `0 < nu < mu`.
    pub nu: f64,
    /// Emission probability of the signal intensity.
    pub p_mu: f64,
    /// Emission probability of the decoy intensity.
    pub p_nu: f64,
    /// Emission probability of vacuum; the three must sum to 1.
    pub p_vacuum: f64,
    /// Fraction of the signal string sacrificed as test bits, in (0,1).
    pub test_fraction: f64,
    /// Pulses per prepared sequence (one sequence per message bit per
    /// receiver).
    pub pulses_per_sequence: u64,
    /// Authentication threshold: the authenticator accepts iff his
    /// conclusive untest mismatch rate is strictly below `t_a`.
    pub t_a: f64,
    /// Verification threshold, `t_a < t_v < 1/2`.
    pub t_v: f64,
}

/// Parameter validation failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamError {
    IntensityOrder,
    ProbabilityRange,
    ProbabilitySum,
    TestFraction,
    Thresholds,
}

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ParamError::IntensityOrder => "intensities must satisfy mu > nu > 0",
            ParamError::ProbabilityRange => "intensity probabilities must lie in [0, 1]",
            ParamError::ProbabilitySum => "intensity probabilities must sum to 1",
            ParamError::TestFraction => "test fraction must lie in (0, 1)",
            ParamError::Thresholds => "thresholds must satisfy 0 < t_a < t_v < 1/2",
        };
        f.write_str(s)
    }
}

impl ProtocolParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        if !(self.mu > self.nu && self.nu > 0.0) {
            return Err(ParamError::IntensityOrder);
        }
        for p in [self.p_mu, self.p_nu, self.p_vacuum] {
            if !(0.0..=1.0).contains(&p) {
                return Err(ParamError::ProbabilityRange);
            }
        }
        if crate::math::abs(self.p_mu + self.p_nu + self.p_vacuum - 1.0) > 1e-12 {
            return Err(ParamError::ProbabilitySum);
        }
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(ParamError::TestFraction);
        }
        if !(self.t_a > 0.0 && self.t_a < self.t_v && self.t_v < 0.5) {
            return Err(ParamError::Thresholds);
        }
        Ok(())
    }

    pub fn intensity(&self, label: IntensityLabel) -> Intensity {
        let mean_photons = match label {
            IntensityLabel::Signal => self.mu,
            IntensityLabel::Decoy => self.nu,
            IntensityLabel::Vacuum => 0.0,
        };
        Intensity {
            label,
            mean_photons,
        }
    }

    pub fn intensity_probability(&self, label: IntensityLabel) -> f64 {
        match label {
            IntensityLabel::Signal => self.p_mu,
            IntensityLabel::Decoy => self.p_nu,
            IntensityLabel::Vacuum => self.p_vacuum,
        }
    }
}

/// Fiber-channel and detection-apparatus description.
///
/// Defaults are a 52% efficient detector, 1.3e-7 dark-count probability per
/// detector per pulse, 0.15% basis misalignment, 1.2 dB insertion loss and
/// 0.194 dB/km fiber attenuation, at zero distance.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelModel {
    /// Detector efficiency, in [0, 1].
    pub eta_det: f64,
    /// Dark-count probability per detector per pulse.
    pub p_dark: f64,
    /// Probability that a photon measured in its own basis lands on the
    /// wrong detector.
    pub e_mis: f64,
    /// Receiver insertion loss in dB.
    pub insert_loss_db: f64,
    /// Fiber attenuation in dB/km.
    pub alpha_db_per_km: f64,
    /// Alice-Bob fiber length in km.
    pub dist_ab_km: f64,
    /// Alice-Charlie fiber length in km.
    pub dist_ac_km: f64,
}

impl Default for ChannelModel {
    fn default() -> Self {
        ChannelModel {
            eta_det: 0.52,
            p_dark: 1.3e-7,
            e_mis: 0.0015,
            insert_loss_db: 1.2,
            alpha_db_per_km: 0.194,
            dist_ab_km: 0.0,
            dist_ac_km: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelError {
    FractionRange,
    NegativeLoss,
}

impl fmt::Display for ChannelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ChannelError::FractionRange => "efficiencies and rates must lie in [0, 1]",
            ChannelError::NegativeLoss => "losses and distances must be non-negative",
        };
        f.write_str(s)
    }
}

impl ChannelModel {
    /// Default channel with both fibers set to the same length.
    pub fn symmetric(dist_km: f64) -> Self {
        ChannelModel {
            dist_ab_km: dist_km,
            dist_ac_km: dist_km,
            ..ChannelModel::default()
        }
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        for f in [self.eta_det, self.p_dark, self.e_mis] {
            if !(0.0..=1.0).contains(&f) {
                return Err(ChannelError::FractionRange);
            }
        }
        for l in [
            self.insert_loss_db,
            self.alpha_db_per_km,
            self.dist_ab_km,
            self.dist_ac_km,
        ] {
            if !(l >= 0.0) {
                return Err(ChannelError::NegativeLoss);
            }
        }
        Ok(())
    }

    pub fn distance_to(&self, recipient: Recipient) -> f64 {
        match recipient {
            Recipient::Bob => self.dist_ab_km,
            Recipient::Charlie => self.dist_ac_km,
        }
    }
}

/// Counts for one participant at one intensity. Real-valued so the same
/// struct carries both integer Monte Carlo tallies and analytic
/// expectations.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IntensityCounts {
    /// Pulses emitted at this intensity.
    pub sent: f64,
    /// Detection events (for matched tables: matched positions).
    pub detected: f64,
    /// Detections translated to a conclusive bit.
    pub conclusive: f64,
    /// Conclusive bits mismatching the sender's encoded bit.
    pub conclusive_errors: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountOrderingError {
    pub recipient: Recipient,
    pub label: IntensityLabel,
}

impl fmt::Display for CountOrderingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "count ordering violated for {:?} at intensity {}",
            self.recipient,
            self.label.name()
        )
    }
}

impl IntensityCounts {
    fn ordered(&self) -> bool {
        0.0 <= self.conclusive_errors
            && self.conclusive_errors <= self.conclusive
            && self.conclusive <= self.detected
            && self.detected <= self.sent
    }
}

/// Per-intensity counts for one participant.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PartyCounts {
    pub per_intensity: [IntensityCounts; 3],
}

impl PartyCounts {
    pub fn at(&self, label: IntensityLabel) -> &IntensityCounts {
        &self.per_intensity[label.index()]
    }

    pub fn at_mut(&mut self, label: IntensityLabel) -> &mut IntensityCounts {
        &mut self.per_intensity[label.index()]
    }
}

/// All sifted detection / error counts for both receivers, the input of the
/// decoy-state estimation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DecoyCounts {
    pub bob: PartyCounts,
    pub charlie: PartyCounts,
}

impl DecoyCounts {
    pub fn party(&self, recipient: Recipient) -> &PartyCounts {
        match recipient {
            Recipient::Bob => &self.bob,
            Recipient::Charlie => &self.charlie,
        }
    }

    pub fn validate(&self) -> Result<(), CountOrderingError> {
        for (recipient, party) in [
            (Recipient::Bob, &self.bob),
            (Recipient::Charlie, &self.charlie),
        ] {
            for label in IntensityLabel::ALL {
                if !party.at(label).ordered() {
                    return Err(CountOrderingError { recipient, label });
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_members_and_bits() {
        for set in SetAssignment::ALL {
            assert_ne!(set.bit0(), set.bit1());
            // members of a set are never orthogonal
            assert!(!set.bit0().is_orthogonal_to(set.bit1()));
            assert_eq!(set.encoded_bit(set.bit0()), Some(false));
            assert_eq!(set.encoded_bit(set.bit1()), Some(true));
        }
        for state in QState::ALL {
            let sets = SetAssignment::sets_for(state);
            assert!(sets[0].contains(state) && sets[1].contains(state));
            assert_ne!(sets[0], sets[1]);
        }
    }

    #[test]
    fn conclusive_outcome_worked_examples() {
        // sent H assigned to {H,+}: outcome `-` gives bit 0, outcome V bit 1
        assert_eq!(
            conclusive_outcome(SetAssignment::HPlus, QState::Minus),
            KeySymbol::Zero
        );
        assert_eq!(
            conclusive_outcome(SetAssignment::HPlus, QState::V),
            KeySymbol::One
        );
        // outcome equal to a set member is inconclusive
        assert_eq!(
            conclusive_outcome(SetAssignment::HPlus, QState::H),
            KeySymbol::Inconclusive
        );
        assert_eq!(
            conclusive_outcome(SetAssignment::HPlus, QState::Plus),
            KeySymbol::Inconclusive
        );
    }

    #[test]
    fn conclusive_outcome_never_returns_bit_for_member() {
        for set in SetAssignment::ALL {
            for member in [set.bit0(), set.bit1()] {
                assert_eq!(conclusive_outcome(set, member), KeySymbol::Inconclusive);
            }
        }
    }

    /// Exhaustive enumeration of the sent-state x basis x outcome table for
    /// an ideal single photon: the conclusive probability is exactly 1/4 for
    /// every (sent, set) pair, and every conclusive bit is correct.
    #[test]
    fn ideal_conclusive_probability_is_one_quarter() {
        for sent in QState::ALL {
            for set in SetAssignment::sets_for(sent) {
                let alice_bit = set.encoded_bit(sent).unwrap();
                let mut conclusive = 0.0;
                let mut errors = 0.0;
                for basis in Basis::ALL {
                    // ideal channel: same-basis measurement reproduces the
                    // state, conjugate-basis measurement is uniform
                    let outcomes: &[(QState, f64)] = if sent.basis() == basis {
                        &[(sent, 1.0)]
                    } else {
                        match basis {
                            Basis::Z => &[(QState::H, 0.5), (QState::V, 0.5)],
                            Basis::X => &[(QState::Plus, 0.5), (QState::Minus, 0.5)],
                        }
                    };
                    for &(outcome, p) in outcomes {
                        match conclusive_outcome(set, outcome) {
                            KeySymbol::Inconclusive => {}
                            sym => {
                                conclusive += 0.5 * p;
                                if sym.bit() != Some(alice_bit) {
                                    errors += 0.5 * p;
                                }
                            }
                        }
                    }
                }
                assert_eq!(conclusive, 0.25, "sent {sent:?} set {set:?}");
                assert_eq!(errors, 0.0);
            }
        }
    }

    #[test]
    fn params_validation() {
        let good = ProtocolParams {
            mu: 0.5,
            nu: 0.1,
            p_mu: 0.6,
            p_nu: 0.25,
            p_vacuum: 0.15,
            test_fraction: 0.1,
            pulses_per_sequence: 1000,
            t_a: 0.01,
            t_v: 0.03,
        };
        assert!(good.validate().is_ok());

        let mut bad = good.clone();
        bad.nu = 0.5;
        assert_eq!(bad.validate(), Err(ParamError::IntensityOrder));

        let mut bad = good.clone();
        bad.p_vacuum = 0.151;
        assert_eq!(bad.validate(), Err(ParamError::ProbabilitySum));

        let mut bad = good.clone();
        bad.t_v = 0.01;
        assert_eq!(bad.validate(), Err(ParamError::Thresholds));

        let mut bad = good;
        bad.t_v = 0.5;
        assert_eq!(bad.validate(), Err(ParamError::Thresholds));
    }

    #[test]
    fn count_ordering() {
        let mut counts = DecoyCounts::default();
        assert!(counts.validate().is_ok());
        let c = counts.bob.at_mut(IntensityLabel::Decoy);
        c.sent = 100.0;
        c.detected = 10.0;
        c.conclusive = 11.0; // conclusive > detected
        assert!(counts.validate().is_err());
    }
}
