//! Word lists backing the rule-based tagger and lemmatizer.

/// Closed-class words that are never nouns or adjectives for our purposes:
/// determiners, prepositions, conjunctions, pronouns, auxiliaries, modals
/// and a few frequent adverbs. Includes the stray clitics "s"/"t" produced
/// by splitting possessives and contractions.
pub const CLOSED_CLASS: &[&str] = &[
    "a", "an", "the", "this", "that", "these", "those", "any", "some", "all", "each", "every",
    "no", "none", "both", "either", "neither", "such", "own",
    "of", "on", "in", "at", "by", "for", "with", "from", "to", "into", "onto", "over", "under",
    "between", "among", "through", "during", "without", "within", "per", "than", "as", "about",
    "after", "before", "against", "upon", "via",
    "and", "or", "but", "nor", "so", "yet", "if", "because", "while", "although", "though",
    "when", "where", "whether", "unless", "until", "since", "once",
    "it", "its", "they", "them", "their", "theirs", "he", "him", "his", "she", "her", "hers",
    "we", "us", "our", "ours", "you", "your", "yours", "i", "me", "my", "mine", "who", "whom",
    "whose", "which", "what", "itself", "themselves", "there", "here",
    "is", "are", "was", "were", "be", "been", "being", "am", "has", "have", "had", "having",
    "do", "does", "did", "done", "doing",
    "may", "might", "must", "shall", "should", "will", "would", "can", "could", "cannot",
    "not", "never", "always", "also", "only", "just", "then", "thus", "therefore", "however",
    "too", "very", "more", "much", "many", "few", "at_least",
    "s", "t",
    "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "zero",
    "eleven", "twelve", "twenty", "fifty", "hundred", "thousand", "million",
];

/// Common adjectives in constraint specifications.
pub const ADJECTIVES: &[&str] = &[
    "maximum", "minimum", "maximal", "minimal", "valid", "invalid", "total", "unique", "equal",
    "unequal", "greater", "less", "least", "most", "same", "different", "distinct", "available",
    "unavailable", "active", "inactive", "positive", "negative", "nonnegative", "empty",
    "nonempty", "full", "old", "new", "current", "previous", "correct", "incorrect", "male",
    "female", "open", "closed", "free", "busy", "single", "multiple", "separate", "direct",
    "eligible", "good", "bad", "high", "low", "large", "small", "long", "short", "early",
    "late", "first", "last", "final", "initial", "major", "minor", "certain", "possible",
    "necessary", "mandatory", "optional",
];

/// Base forms of verbs that appear in specification text. Inflected forms
/// are recognized by stripping -s/-ed/-ing and re-checking this list.
pub const VERBS: &[&str] = &[
    "exceed", "contain", "include", "exclude", "require", "belong", "operate", "manage",
    "hold", "own", "store", "record", "register", "exist", "apply", "allow", "permit",
    "enroll", "earn", "burn", "book", "travel", "depart", "arrive", "supervise", "maintain",
    "associate", "participate", "issue", "expire", "start", "end", "begin", "imply",
    "satisfy", "ensure", "provide", "deliver", "generate", "accumulate", "redeem", "validate",
    "process", "serve", "make", "take", "give", "get", "use", "offer", "assign", "link",
    "connect", "relate", "refer", "represent", "describe", "specify", "define", "return",
    "accept", "reject", "cancel", "go", "come", "keep", "remain", "stay", "become", "mean",
    "need", "want", "occur", "happen", "correspond", "match", "differ", "equal",
];

/// Nouns ending in -ing that must not be mistaken for verb forms.
pub const ING_NOUNS: &[&str] = &[
    "string", "thing", "king", "ring", "spring", "nothing", "something", "anything",
    "everything", "sibling", "ceiling", "building", "morning", "evening", "wing", "booking",
    "boarding", "meaning",
];

/// Irregular lemma mapping, applied before the suffix rules. Entries that
/// map to themselves block a suffix rule that would otherwise misfire.
pub const IRREGULAR_LEMMAS: &[(&str, &str)] = &[
    ("men", "man"),
    ("women", "woman"),
    ("children", "child"),
    ("people", "person"),
    ("persons", "person"),
    ("feet", "foot"),
    ("teeth", "tooth"),
    ("mice", "mouse"),
    ("geese", "goose"),
    ("buses", "bus"),
    ("statuses", "status"),
    ("analyses", "analysis"),
    ("crises", "crisis"),
    ("theses", "thesis"),
    ("shoes", "shoe"),
    ("lives", "life"),
    ("leaves", "leaf"),
    ("knives", "knife"),
    ("wolves", "wolf"),
    ("halves", "half"),
    ("shelves", "shelf"),
    ("selves", "self"),
    ("series", "series"),
    ("species", "species"),
    ("data", "data"),
    ("criteria", "criterion"),
    ("is", "be"),
    ("are", "be"),
    ("was", "be"),
    ("were", "be"),
    ("been", "be"),
    ("being", "be"),
    ("am", "be"),
    ("has", "have"),
    ("had", "have"),
    ("having", "have"),
    ("does", "do"),
    ("did", "do"),
    ("done", "do"),
    ("made", "make"),
    ("making", "make"),
    ("taken", "take"),
    ("took", "take"),
    ("taking", "take"),
    ("given", "give"),
    ("gave", "give"),
    ("giving", "give"),
    ("got", "get"),
    ("getting", "get"),
    ("went", "go"),
    ("gone", "go"),
    ("goes", "go"),
    ("going", "go"),
    ("held", "hold"),
    ("sold", "sell"),
    ("paid", "pay"),
    ("sent", "send"),
    ("spent", "spend"),
    ("left", "leave"),
    ("flew", "fly"),
    ("flown", "fly"),
    ("used", "use"),
    ("using", "use"),
    ("stored", "store"),
    ("storing", "store"),
    ("issued", "issue"),
    ("issuing", "issue"),
    ("managed", "manage"),
    ("managing", "manage"),
    ("validated", "validate"),
    ("validating", "validate"),
    ("generated", "generate"),
    ("generating", "generate"),
    ("operated", "operate"),
    ("operating", "operate"),
    ("included", "include"),
    ("including", "include"),
    ("required", "require"),
    ("requiring", "require"),
    ("ensured", "ensure"),
    ("ensuring", "ensure"),
    ("provided", "provide"),
    ("providing", "provide"),
    ("enrolled", "enroll"),
    ("enrolling", "enroll"),
    ("cancelled", "cancel"),
    ("cancelling", "cancel"),
    ("travelled", "travel"),
    ("travelling", "travel"),
    ("writing", "write"),
    ("written", "write"),
    ("wrote", "write"),
    ("better", "good"),
    ("best", "good"),
    ("worse", "bad"),
    ("worst", "bad"),
    ("larger", "large"),
    ("largest", "large"),
    ("smaller", "small"),
    ("smallest", "small"),
    ("greater", "great"),
    ("greatest", "great"),
    ("higher", "high"),
    ("highest", "high"),
    ("lower", "low"),
    ("lowest", "low"),
    ("older", "old"),
    ("oldest", "old"),
    ("newer", "new"),
    ("newest", "new"),
    ("earlier", "early"),
    ("earliest", "early"),
    ("later", "late"),
    ("latest", "late"),
    ("fewer", "few"),
    ("fewest", "few"),
    ("speed", "speed"),
    ("breed", "breed"),
    ("indeed", "indeed"),
    ("need", "need"),
    ("exceed", "exceed"),
    ("proceed", "proceed"),
];
