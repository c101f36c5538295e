//! Built-in default emotion resources, small enough for tests and the
//! synthetic corpus. Same TSV format as on-disk resource files.

pub const EMOTION_LEXICON_TSV: &str = "\
angry\tanger
furious\tanger
outraged\tanger
liar\tanger
rage\tanger
hate\tanger
hostile\tanger
insult\tanger
mad\tanger
enraged\tanger
bitter\tanger
irritated\tanger
eager\tanticipation
expect\tanticipation
await\tanticipation
hope\tanticipation
soon\tanticipation
upcoming\tanticipation
anticipate\tanticipation
forecast\tanticipation
plan\tanticipation
curious\tanticipation
disgusting\tdisgust
horrible\tdisgust
gross\tdisgust
vile\tdisgust
nasty\tdisgust
repulsive\tdisgust
sickening\tdisgust
filthy\tdisgust
revolting\tdisgust
foul\tdisgust
terrified\tfear
afraid\tfear
scared\tfear
panic\tfear
dread\tfear
horror\tfear
frightened\tfear
alarming\tfear
threat\tfear
terror\tfear
anxious\tfear
happy\tjoy
good\tjoy
thanks\tjoy
peaceful\tjoy
delighted\tjoy
wonderful\tjoy
cheerful\tjoy
glad\tjoy
joyful\tjoy
lovely\tjoy
pleased\tjoy
sad\tsadness
grief\tsadness
sorrow\tsadness
miserable\tsadness
crying\tsadness
heartbroken\tsadness
gloomy\tsadness
mourning\tsadness
depressed\tsadness
tragic\tsadness
shocked\tsurprise
unbelievable\tsurprise
astonished\tsurprise
startled\tsurprise
amazed\tsurprise
unexpected\tsurprise
stunned\tsurprise
sudden\tsurprise
incredible\tsurprise
wow\tsurprise
calm\ttrust
agree\ttrust
helpful\ttrust
trust\ttrust
reliable\ttrust
honest\ttrust
faithful\ttrust
loyal\ttrust
credible\ttrust
sincere\ttrust
dependable\ttrust
";

pub const INTENSITY_TSV: &str = "\
angry\t0.80
furious\t0.95
outraged\t0.90
liar\t0.75
rage\t0.92
hate\t0.85
hostile\t0.70
insult\t0.65
mad\t0.60
enraged\t0.93
bitter\t0.55
irritated\t0.45
eager\t0.55
hope\t0.45
anticipate\t0.40
curious\t0.35
disgusting\t0.85
horrible\t0.88
gross\t0.60
vile\t0.82
nasty\t0.70
repulsive\t0.80
sickening\t0.78
revolting\t0.76
terrified\t0.95
afraid\t0.70
scared\t0.72
panic\t0.88
dread\t0.75
horror\t0.90
frightened\t0.74
alarming\t0.66
terror\t0.92
anxious\t0.58
happy\t0.70
good\t0.40
thanks\t0.45
peaceful\t0.35
delighted\t0.80
wonderful\t0.75
cheerful\t0.65
glad\t0.55
joyful\t0.78
lovely\t0.60
pleased\t0.52
sad\t0.60
grief\t0.85
sorrow\t0.75
miserable\t0.80
crying\t0.70
heartbroken\t0.88
gloomy\t0.50
depressed\t0.82
tragic\t0.78
shocked\t0.80
unbelievable\t0.70
astonished\t0.75
startled\t0.55
amazed\t0.65
stunned\t0.72
incredible\t0.68
wow\t0.50
calm\t0.30
agree\t0.35
helpful\t0.40
trust\t0.50
reliable\t0.45
honest\t0.55
faithful\t0.50
loyal\t0.48
credible\t0.42
sincere\t0.46
";

pub const SENTIMENT_TSV: &str = "\
angry\t-1
furious\t-1
outraged\t-1
liar\t-1
rage\t-1
hate\t-1
hostile\t-1
insult\t-1
disgusting\t-1
horrible\t-1
gross\t-1
vile\t-1
nasty\t-1
repulsive\t-1
sickening\t-1
terrified\t-1
afraid\t-1
scared\t-1
panic\t-1
dread\t-1
horror\t-1
terror\t-1
sad\t-1
grief\t-1
sorrow\t-1
miserable\t-1
heartbroken\t-1
depressed\t-1
tragic\t-1
awful\t-1
bad\t-1
terrible\t-1
worst\t-1
fake\t-1
wrong\t-1
happy\t+1
good\t+1
thanks\t+1
peaceful\t+1
delighted\t+1
wonderful\t+1
cheerful\t+1
glad\t+1
joyful\t+1
lovely\t+1
pleased\t+1
calm\t+1
agree\t+1
helpful\t+1
trust\t+1
reliable\t+1
honest\t+1
faithful\t+1
loyal\t+1
credible\t+1
sincere\t+1
great\t+1
best\t+1
nice\t+1
true\t+1
right\t+1
";

pub const EMOTICONS_TXT: &str = "\
:)
:(
:D
:P
;)
:/
:O
:|
<3
:'(
xD
^_^
T_T
o_O
";
