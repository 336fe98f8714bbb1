#!/usr/bin/env python3
"""Regenerates crates/core/data/verbs.tsv (inflected form -> lemma)."""
import os

IRREGULAR = """
arise arose arisen
awake awoke awoken
be was been
bear bore borne
beat beat beaten
become became become
begin began begun
bend bent bent
bet bet bet
bid bid bid
bind bound bound
bite bit bitten
bleed bled bled
blow blew blown
break broke broken
breed bred bred
bring brought brought
build built built
burn burnt burnt
burst burst burst
buy bought bought
cast cast cast
catch caught caught
choose chose chosen
cling clung clung
come came come
cost cost cost
creep crept crept
cut cut cut
deal dealt dealt
dig dug dug
dive dove dived
do did done
draw drew drawn
dream dreamt dreamt
drink drank drunk
drive drove driven
eat ate eaten
fall fell fallen
feed fed fed
feel felt felt
fight fought fought
find found found
flee fled fled
fling flung flung
fly flew flown
forbid forbade forbidden
forget forgot forgotten
forgive forgave forgiven
freeze froze frozen
get got gotten
give gave given
go went gone
grind ground ground
grow grew grown
hang hung hung
have had had
hear heard heard
hide hid hidden
hit hit hit
hold held held
hurt hurt hurt
keep kept kept
kneel knelt knelt
know knew known
lay laid laid
lead led led
lean leant leant
leap leapt leapt
learn learnt learnt
leave left left
lend lent lent
let let let
lie lay lain
light lit lit
lose lost lost
make made made
mean meant meant
meet met met
mislead misled misled
overcome overcame overcome
overhear overheard overheard
overtake overtook overtaken
pay paid paid
put put put
quit quit quit
read read read
rend rent rent
rid rid rid
ride rode ridden
ring rang rung
rise rose risen
run ran run
say said said
see saw seen
seek sought sought
sell sold sold
send sent sent
set set set
shake shook shaken
shed shed shed
shine shone shone
shoot shot shot
show showed shown
shrink shrank shrunk
shut shut shut
sing sang sung
sink sank sunk
sit sat sat
slay slew slain
sleep slept slept
slide slid slid
sling slung slung
slit slit slit
smite smote smitten
speak spoke spoken
speed sped sped
spend spent spent
spill spilt spilt
spin spun spun
spit spat spat
split split split
spread spread spread
spring sprang sprung
stand stood stood
steal stole stolen
stick stuck stuck
sting stung stung
stink stank stunk
stride strode stridden
strike struck struck
string strung strung
strive strove striven
swear swore sworn
sweep swept swept
swell swelled swollen
swim swam swum
swing swung swung
take took taken
teach taught taught
tear tore torn
tell told told
think thought thought
throw threw thrown
thrust thrust thrust
tread trod trodden
understand understood understood
undertake undertook undertaken
undo undid undone
upset upset upset
wake woke woken
wear wore worn
weave wove woven
weep wept wept
win won won
wind wound wound
withdraw withdrew withdrawn
withhold withheld withheld
withstand withstood withstood
wring wrung wrung
write wrote written
"""

# extra irregular-looking variants that are also in use
EXTRA_FORMS = {
    "be": ["am", "is", "are", "were", "being", "been", "was"],
    "have": ["has", "having"],
    "do": ["does", "doing"],
    "go": ["goes"],
    "burn": ["burned"], "dream": ["dreamed"], "learn": ["learned"],
    "lean": ["leaned"], "leap": ["leaped"], "spill": ["spilled"],
    "light": ["lighted"], "dive": ["dived"], "get": ["got"],
    "kneel": ["kneeled"], "awake": ["awaked"], "speed": ["speeded"],
    "shine": ["shined"],
}

REGULAR = """
accept accompany accuse ache achieve acknowledge act add address admire admit admonish adopt advance
advise affect afford agree aid aim alarm alert allow alter amaze amuse announce annoy answer apologize
appear applaud apply appoint approach approve argue arm arrange arrest arrive ask assault assemble assist
assure astonish attach attack attempt attend avenge avoid await bake balance ban bandage banish bark bathe
battle beam beckon beg behave believe belong bellow bless blame blink block blush boast boil bolt bother
bounce bow brace brag breathe bribe brush bump burn bury button calculate call calm camp care carry carve
cause caution celebrate challenge change charge charm chase chat cheat check cheer chew choke chop claim
clap clasp clean clear climb clip close clutch coax collapse collect comb comfort command comment commit
compare compel compete complain complete concern conclude condemn confess confide confront confuse congratulate
connect conquer consider console consult contain continue control convince cook cope copy correct cough count
cover crack crash crawl create cross crouch crush cry cure curse curtsy dance dare dash deceive decide declare
decorate defeat defend defy delay delight deliver demand deny depart depend describe desert deserve desire
destroy detect develop devour die disagree disappear disappoint discover discuss disguise dismiss disobey
display dissolve disturb dodge doubt drag drain dress drift drill drip drop drown dry duck dump dust earn
educate embarrass embrace emerge employ empty encourage end endure enjoy enter entertain escape escort examine
excite excuse exist expect explain explode explore express fade fail faint fan fasten favour fear fence fetch
file fill finish fire fix flap flash flatter float flood flow fold follow fool force form found free frighten
frown fry gain gasp gather gaze glance glare glide glow grab grant grasp greet grin grip groan growl grumble
guard guess guide gulp handle happen harm hate haul head heal heap help hesitate hiss hop hope hover howl hug
hum hunt hurry identify ignore imagine impress improve include inform injure insist inspect instruct insult
intend interrupt introduce invent invite itch jerk jog join joke judge juggle jump kick kill kiss knock label
land last laugh launch lick lift like limp list listen live load lock long look love lunge manage march mark
marry match matter melt mend mention miss moan mock mourn move mumble murder murmur mutter nag nail name need
nod note notice obey object observe obtain occur offend offer open oppose order owe own pack paddle paint
pant park part pass pause peck pedal peel peep perform permit persuade pick pinch place plan plant play plead
please plunge point poke polish pop possess post pour praise pray preach prefer prepare present preserve press
pretend prevent prick print proceed produce promise protect protest prove provide pull pump punch punish push
question quiver race rage rain raise rattle reach realise realize receive recognise recognize recommend record
recover reduce refuse regret reign reject rejoice relax release rely remain remark remember remind remove
repair repeat replace reply report request require rescue resist respect rest retire retreat return reveal
rinse risk roar roast rob rock roll rot rub ruin rule rush sack sail salute save scare scatter scold scorch
scowl scramble scrape scratch scream screw scribble scrub seal search seize separate serve settle shave shelter
shiver shock shout shove shrug sigh sign signal sin skip slam slap slip slow smash smell smile smirk smoke
snap snatch sneak sneeze sniff snore snort sob soothe sound spare spark sparkle spell spill spoil spot spray
sprint squash squeak squeal squeeze stab stagger stamp stare start startle starve stay steer step stir stitch
stop store storm strangle stretch stroll struggle stuff stumble stun submit succeed suck suffer suggest supply
support suppose surprise surrender surround suspect swallow sway tackle talk tame tap taste tease telephone
tempt terrify test thank threaten tick tickle tie tip tire toss touch tour tow trace trade train transport
trap travel treat tremble trick trip trot trouble trust try tug tumble turn twist type unite unlock unpack
untie urge use vanish visit wail wait walk wander want warn wash waste watch water wave welcome whine whip
whirl whisper whistle wink wipe wish wobble wonder work worry wound wrap wreck wrestle yank yawn yell yelp zip
abandon abduct abolish absorb abuse accelerate accommodate accumulate adjust administer adore advertise
allocate amend analyse anticipate appeal appreciate arouse ascend assassinate assert assess assign associate
attract authorise banter bargain baptise barricade beckon befriend behead betray bicker blaze bleat blossom
bluff blunder board bore borrow bounce brandish breach brood browse buckle budge bundle bustle cackle calm
capture caress cease chain chant chatter cherish chide chuckle circle clatter clench cling cloak clamber
collide combat comfort commence compose conceal concentrate confirm conspire construct consume contemplate
contradict contribute converse convey convict cower crave crumble crumple curl cushion damage dangle dart
dazzle deafen debate decay declare decline deduce defy delve demolish depict deploy deposit descend despair
despise detain devote dictate differ dig dine dip direct disarm discard discharge disclose disdain disgrace
dislike dismount dispatch dispute distract distribute dive divide dominate donate doze drape dread drench
drone droop dwell ease eavesdrop echo eject elect elope embark emit enchant enclose encounter endanger engage
engulf enlist enrage ensure entice entrust envy equip erupt establish evacuate evade evaporate evict exaggerate
exchange exclaim execute exhale exhaust exile expand expel explode expose extend extinguish fasten feast
fiddle fidget flail flee flick flinch fling flip flirt flock flounder flourish fluster flutter foil forge
fret fumble fuss gallop gamble gape garble gesture giggle glimpse glisten gloat gnaw gobble gossip govern
grapple graze grieve grope grunt gush haggle halt hammer hamper harass harvest hasten haunt heave heed hinder
hint hobble hoist holler honour hook hoot horrify huddle humiliate hurl hurtle hush ignite illuminate imitate
implore imprison incline inhale inherit inquire inspire interfere interrogate intervene intimidate invade
investigate irritate jab jingle jolt jostle journey kindle knit lament lash latch lecture liberate linger
loathe lodge loiter lug lull lurch lure lurk marvel massacre meddle mingle mislead moisten mount mutilate
navigate negotiate nestle nibble nudge nurse nuzzle oblige occupy oversee overthrow overwhelm pace panic parade
pardon parry patrol pat peer penetrate perch perish persist pester pierce pile pillage pin pity plod plot
plough pluck plummet plunder ponder pounce pout prance prod profess prolong prompt propose prosecute prowl
pry punt purchase pursue quarrel quench raid rally ram ransack rant rap rave reassure rebel rebuke recall
recite reckon recoil reconcile recount redeem reflect refresh regain rehearse reinforce relent relieve relish
remedy renounce repel repent reproach resent reside resign resolve resume retort retrieve revenge revive revolt
reward ridicule rip roam rouse rumble rummage rustle sabotage sag salvage sample sate saunter savour scale
scan scoff scorn scour scramble scurry seduce sever shatter shield shimmer shove shriek shrivel shudder
shuffle sidle simmer sip skid skim slash slaughter slither slouch slumber slump smack smear smother snarl
sneer snicker snoop snuggle soak soar solve sparkle spatter spear spew splash sprawl sprinkle sputter squabble
squat squint squirm stalk stammer startle steady stifle stomp stoop straddle straighten strain stray strengthen
strip stroke strut stutter subdue succumb summon surge survey survive suspend swarm swat swerve swindle swipe
swirl swoop tangle taunt teeter terrorise testify thrash thrive throttle thud thump thunder topple torment
torture totter tow trample transform trek trudge tuck tutor twitch uncover undress unfold unleash unveil
unwrap uphold vault venture vex vow wade waddle wag wager wake waltz wane warble warm weaken weary wed weigh
wheeze whimper whirl whoop widen wield wiggle wince withdraw wobble worship wound wreak wrench writhe yearn
yield seem notice kneel
"""

DOUBLE = set("""admit commit compel control equip expel occur patrol permit prefer rebel regret
repel submit propel refer confer deter omit transmit incur recur defer forget""".split())

VOWELS = "aeiou"


def double_final(v):
    if v in DOUBLE:
        return True
    if len(v) < 3 or v[-1] in "wxy" or v[-1] in VOWELS:
        return False
    syllables = sum(1 for i, c in enumerate(v) if c in VOWELS and (i == 0 or v[i - 1] not in VOWELS))
    return syllables == 1 and v[-2] in VOWELS and v[-3] not in VOWELS


def third(v):
    if v.endswith(("s", "x", "z", "ch", "sh", "o")):
        return v + "es"
    if v.endswith("y") and v[-2] not in VOWELS:
        return v[:-1] + "ies"
    return v + "s"


def past(v):
    if v.endswith("e"):
        return v + "d"
    if v.endswith("y") and v[-2] not in VOWELS:
        return v[:-1] + "ied"
    if v.endswith("c"):
        return v + "ked"
    if double_final(v):
        return v + v[-1] + "ed"
    return v + "ed"


def ing(v):
    if v.endswith("ie"):
        return v[:-2] + "ying"
    if v.endswith("e") and not v.endswith(("ee", "ye", "oe")) and v != "be":
        return v[:-1] + "ing"
    if v.endswith("c"):
        return v + "king"
    if double_final(v):
        return v + v[-1] + "ing"
    return v + "ing"


def main():
    forms = {}

    def add(form, lemma):
        forms.setdefault(form, lemma)

    irregular = {}
    for line in IRREGULAR.strip().splitlines():
        base, p, pp = line.split()
        irregular[base] = (p, pp)
    for base, (p, pp) in irregular.items():
        for f in [base, p, pp, third(base), ing(base)] + EXTRA_FORMS.get(base, []):
            add(f, base)
    for base, extra in EXTRA_FORMS.items():
        for f in extra:
            add(f, base)
    for base in sorted(set(REGULAR.split())):
        if base in irregular:
            continue
        for f in [base, third(base), past(base), ing(base)] + EXTRA_FORMS.get(base, []):
            add(f, base)

    out = os.path.join(os.path.dirname(__file__), "..", "crates", "core", "data", "verbs.tsv")
    with open(out, "w") as fh:
        fh.write("# inflected form<TAB>lemma (generated by scripts/gen_verb_lexicon.py)\n")
        for form in sorted(forms):
            fh.write(f"{form}\t{forms[form]}\n")
    print(len(forms), "forms,", len(set(forms.values())), "lemmas")


if __name__ == "__main__":
    main()
