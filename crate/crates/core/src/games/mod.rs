//! Game implementations.

pub mod bandit;
pub mod heyfish;
pub mod hexgrid;
pub mod quadamazons;
pub mod quadrothello;
pub mod registry;
pub mod teamhex;
pub mod three_player_hex;
pub mod threehex;
pub mod triinversion;
pub mod trinim;

pub use bandit::{Bandit, BanditAction, BanditState};
pub use heyfish::{HeyFish, HeyFishAction, HeyFishState};
pub use quadamazons::{Quadamazons, QuadamazonsAction, QuadamazonsState};
pub use quadrothello::{Quadrothello, QuadrothelloAction, QuadrothelloState};
pub use registry::{
    connection_check, make_game, perft_check, AnyGame, ConnectionTarget, GameParams,
    ParamValue, GAME_NAMES,
};
pub use teamhex::{Teamhex, TeamhexAction, TeamhexGoal, TeamhexOutcome, TeamhexState};
pub use three_player_hex::{ThreePlayerHex, ThreePlayerHexAction, ThreePlayerHexState};
pub use threehex::{Threehex, ThreehexAction, ThreehexState};
pub use triinversion::{Triinversion, TriinversionAction, TriinversionState};
pub use trinim::{TriNim, TriNimAction, TriNimState};
