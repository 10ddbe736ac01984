#include "lmlp/family.hpp"

#include "lmlp/error.hpp"
#include "lmlp/hashing.hpp"

#include <algorithm>
#include <array>

namespace lmlp {

namespace {

constexpr std::array kMaleNames = {
    "Joseph", "George", "Dale", "Nicholas", "Michael", "Glen", "Milton", "Donald", "Richard",
    "Charles", "James", "John", "William", "Steve", "Hugh", "Wesley", "Francisco", "Samuel",
    "Thomas", "David", "Robert", "Edgar", "Theodore", "Gilbert", "Allan", "Jose", "Bobby",
    "Antonio", "Jeremy", "Louis", "Clarence", "Ross", "Irvin", "Pat", "Patrick", "Arthur",
    "Walter", "Henry", "Frank", "Harold", "Ralph", "Eugene", "Howard", "Carl", "Roger", "Peter",
    "Victor", "Martin", "Oscar", "Felix", "Simon", "Leon", "Vincent", "Mario", "Hector", "Ivan",
    "Oliver", "Lucas", "Adrian", "Julian"};

constexpr std::array kFemaleNames = {
    "Ashley", "Lillian", "Nancy", "Katherine", "Carrie", "Natasha", "Cindy", "Lynn", "Nadia",
    "Margaret", "Antonia", "Margaretta", "Frances", "Elizabeth", "Maria", "Jennifer", "Lena",
    "Theresa", "Janet", "Patricia", "Charlotte", "Marie", "Mary", "Melanie", "Irene", "Wilhelmina",
    "Constance", "Ellen", "Elsie", "Kathleen", "Mabel", "Alice", "Dorothy", "Helen", "Ruth",
    "Virginia", "Evelyn", "Joan", "Martha", "Gloria", "Sara", "Rose", "Clara", "Edith", "Grace",
    "Hazel", "Irma", "Julia", "Laura", "Nora", "Olive", "Paula", "Rita", "Stella", "Tina",
    "Vera", "Wanda", "Yvonne", "Zoe", "Diana"};

const char* kin(Gender g, const char* male, const char* female) {
    return g == Gender::Male ? male : female;
}

}  // namespace

std::optional<std::size_t> FamilyGraph::index_of(EntityId e) const {
    for (std::size_t i = 0; i < people.size(); ++i) {
        if (people[i].id == e) return i;
    }
    return std::nullopt;
}

std::optional<Gender> FamilyGraph::gender_of(EntityId e) const {
    if (auto i = index_of(e)) return people[*i].gender;
    return std::nullopt;
}

std::vector<Triple> kinship_facts(const std::vector<Person>& people) {
    std::vector<Triple> facts;
    auto rel = [](const char* r) { return RelationId::intern(r); };
    for (std::size_t i = 0; i < people.size(); ++i) {
        const Person& x = people[i];
        if (x.father) facts.push_back({x.id, rel("father"), people[*x.father].id});
        if (x.mother) facts.push_back({x.id, rel("mother"), people[*x.mother].id});
        if (x.spouse) {
            const Person& s = people[*x.spouse];
            facts.push_back({x.id, rel(kin(s.gender, "husband", "wife")), s.id});
        }
        for (std::size_t c : x.children) {
            facts.push_back({x.id, rel(kin(people[c].gender, "son", "daughter")), people[c].id});
        }
        if (x.father) {
            for (std::size_t c : people[*x.father].children) {
                if (c == i) continue;
                facts.push_back({x.id, rel(kin(people[c].gender, "brother", "sister")), people[c].id});
            }
        }
    }
    return facts;
}

FamilyGraph generate_family_graph(std::size_t n, std::uint64_t seed, const std::string& surname) {
    if (n < 4) throw Error(ErrorKind::InfeasibleSize, "a family graph needs at least 4 people");
    if (n > kMaleNames.size() + kFemaleNames.size()) {
        throw Error(ErrorKind::InfeasibleSize, "not enough distinct names for " + std::to_string(n) + " people");
    }
    Rng rng(seed);
    std::vector<std::size_t> male_order = permutation(kMaleNames.size(), derive_seed(seed, 1));
    std::vector<std::size_t> female_order = permutation(kFemaleNames.size(), derive_seed(seed, 2));
    std::size_t next_male = 0, next_female = 0;

    std::vector<Person> people;
    std::vector<Gender> genders;
    auto add_person = [&](Gender g) -> std::size_t {
        // Fall back to the other gender's pool only if one pool runs dry.
        if (g == Gender::Male && next_male == kMaleNames.size()) g = Gender::Female;
        if (g == Gender::Female && next_female == kFemaleNames.size()) g = Gender::Male;
        std::string name = g == Gender::Male ? kMaleNames[male_order[next_male++]]
                                             : kFemaleNames[female_order[next_female++]];
        if (!surname.empty()) name += " " + surname;
        Person p;
        p.id = EntityId::intern(name);
        p.gender = g;
        people.push_back(std::move(p));
        return people.size() - 1;
    };
    auto marry = [&](std::size_t a, std::size_t b) {
        people[a].spouse = b;
        people[b].spouse = a;
    };

    const std::size_t f = add_person(Gender::Male);
    const std::size_t m = add_person(Gender::Female);
    marry(f, m);

    while (people.size() < n) {
        std::vector<std::size_t> couples;  // husband index per couple
        std::vector<std::size_t> single_blood;
        for (std::size_t i = 0; i < people.size(); ++i) {
            const Person& p = people[i];
            if (p.spouse && p.gender == Gender::Male) couples.push_back(i);
            if (!p.spouse && p.father) single_blood.push_back(i);
        }
        if (!single_blood.empty() && rng.bernoulli(0.35)) {
            const std::size_t who = rng.pick(single_blood);
            const Gender g = people[who].gender == Gender::Male ? Gender::Female : Gender::Male;
            const std::size_t spouse = add_person(g);
            if (people[spouse].gender == people[who].gender) {
                // Name pools exhausted for the needed gender; undo.
                people.pop_back();
                continue;
            }
            marry(who, spouse);
            continue;
        }
        const std::size_t husband = rng.pick(couples);
        const std::size_t wife = *people[husband].spouse;
        const std::size_t child = add_person(rng.bernoulli(0.5) ? Gender::Male : Gender::Female);
        people[child].father = husband;
        people[child].mother = wife;
        people[husband].children.push_back(child);
        people[wife].children.push_back(child);
    }

    FamilyGraph g;
    g.seed = seed;
    g.facts = kinship_facts(people);
    g.people = std::move(people);
    return g;
}

}  // namespace lmlp
