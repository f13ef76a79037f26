#include "synthrl/vocabulary.hpp"

#include <algorithm>
#include <array>

namespace synthrl::vocab {
namespace {

constexpr std::array<std::string_view, 100> kFemaleGiven = {
    "Aida", "Alison", "Barabara", "Bernadette", "Bettina", "Briana", "Candace", "Carlene", "Cecila", "Charla",
    "Christel", "Claudette", "Corrine", "Daisy", "Deanna", "Delia", "Dominique", "Dorthy", "Edna", "Elfrieda",
    "Elinor", "Elois", "Esperanza", "Evangeline", "Fay", "Felicia", "Georgette", "Gertrude", "Gwendolyn", "Harriet",
    "Hortencia", "Ilona", "Imogene", "Ingrid", "Jacquelin", "Jeanette", "Joella", "Juliana", "Karleen", "Katrina",
    "Lannie", "Leeann", "Leisa", "Leonora", "Lesley", "Lorinda", "Lucinda", "Mabel", "Marcella", "Marguerite",
    "Marisol", "Maxine", "Melba", "Mirella", "Myrtle", "Nadine", "Nanette", "Noreen", "Octavia", "Odette",
    "Ophelia", "Pauline", "Petra", "Philippa", "Priscilla", "Queenie", "Rachelle", "Rosalind", "Rosetta", "Sabina",
    "Selma", "Shelli", "Sigrid", "Stacia", "Sybil", "Tamara", "Theodora", "Thomasina", "Trudy", "Ursula",
    "Valentina", "Velma", "Veronica", "Vicki", "Vivienne", "Wanda", "Wilhelmina", "Winifred", "Xiomara", "Yolanda",
    "Yvette", "Zelda", "Zenobia", "Zora", "Agatha", "Beryl", "Clementine", "Dagmar", "Eudora", "Florence",
};

constexpr std::array<std::string_view, 100> kMaleGiven = {
    "Alvaro", "Ambrose", "Anselm", "Barnaby", "Bartholomew", "Benedict", "Brian", "Casimir", "Cedric", "Clement",
    "Cornelius", "Cyrus", "Desmond", "Dino", "Dorian", "Eli", "Elmer", "Emmett", "Erasmus", "Ezekiel",
    "Fabian", "Ferdinand", "Fletcher", "Gene", "Gideon", "Godfrey", "Gustavo", "Horace", "Ignatius", "Isiah",
    "Jasper", "Jerome", "Julius", "Kendrick", "Lazarus", "Leander", "Leopold", "Lionel", "Lucius", "Malcolm",
    "Marcel", "Mortimer", "Nathaniel", "Nikolai", "Norbert", "Octavio", "Orson", "Oswald", "Percival", "Phineas",
    "Quentin", "Rafael", "Randolph", "Ricardo", "Roderick", "Rufus", "Ryan", "Silas", "Solomon", "Stellan",
    "Thaddeus", "Theodore", "Tobias", "Ulysses", "Vernon", "Virgil", "Wallace", "Wilbert", "Williams", "Winston",
    "Xavier", "Yusuf", "Zachariah", "Abner", "Basil", "Cletus", "Darius", "Edmund", "Florian", "Gilbert",
    "Hector", "Ivo", "Jethro", "Konrad", "Lorenzo", "Magnus", "Nestor", "Osric", "Piers", "Reginald",
    "Sebastiano", "Tiberius", "Ugo", "Valentin", "Waldo", "Alaric", "Bertram", "Crispin", "Dmitri", "Evander",
};

constexpr std::array<std::string_view, 60> kSurnames = {
    "Wang", "Beltran", "Hackworth", "Smock", "Toombs", "Lutz", "Abernathy", "Blackwood", "Calloway", "Dunmore",
    "Eastwick", "Fairbanks", "Gallagher", "Holloway", "Ingersoll", "Jessup", "Kettering", "Lockhart", "Mayfield",
    "Northcott", "Oakley", "Pendleton", "Quimby", "Radcliffe", "Sterling", "Thornbury", "Underhill", "Vance",
    "Whitlock", "Yardley", "Ashdown", "Brennick", "Crowder", "Delacroix", "Ellery", "Fenwick", "Grimsby",
    "Hartigan", "Iverson", "Jarrell", "Kimball", "Larkspur", "Marchetti", "Nakashima", "Ortega", "Prescott",
    "Quillen", "Rosenthal", "Salazar", "Trevino", "Umberto", "Villanueva", "Wexler", "Xiong", "Yamada", "Zimmer",
    "Albright", "Birchfield", "Cartwright", "Dempsey",
};

constexpr std::array<std::string_view, 70> kHobbies = {
    "birdwatching", "finance", "dominoes", "archery", "astronomy", "baking", "beekeeping", "bowling", "calligraphy",
    "canoeing", "chess", "crocheting", "cycling", "dancing", "embroidery", "fencing", "fishing", "gardening",
    "geocaching", "glassblowing", "hiking", "ice skating", "jigsaw puzzles", "juggling", "kayaking", "knitting",
    "lacemaking", "leatherworking", "magic", "meditation", "metal detecting", "model building", "mountaineering",
    "origami", "painting", "photography", "pottery", "quilting", "rock climbing", "rowing", "sailing", "scrapbooking",
    "sculpting", "sewing", "skiing", "skydiving", "soapmaking", "stamp collecting", "surfing", "swimming",
    "table tennis", "taxidermy", "tea tasting", "topiary", "trainspotting", "video gaming", "volunteering",
    "weaving", "whittling", "wine tasting", "woodworking", "writing", "yoga", "zumba", "falconry", "lapidary",
    "bonsai", "kite flying", "cartography", "genealogy",
};

constexpr std::array<std::string_view, 70> kOccupations = {
    "theatre manager", "biomedical scientist", "accountant", "actuary", "air traffic controller", "archivist",
    "architect", "astronomer", "audiologist", "baker", "barrister", "biochemist", "bookseller", "botanist",
    "bricklayer", "cartographer", "chemical engineer", "chiropractor", "civil engineer", "clinical psychologist",
    "curator", "dental hygienist", "dietitian", "economist", "electrician", "environmental consultant", "farmer",
    "film editor", "firefighter", "florist", "geologist", "glazier", "graphic designer", "hydrologist",
    "illustrator", "interpreter", "jeweller", "journalist", "landscape architect", "librarian", "locksmith",
    "marine biologist", "mathematician", "meteorologist", "midwife", "museum educator", "music therapist",
    "nurse", "occupational therapist", "optometrist", "paramedic", "pharmacist", "physicist", "pilot",
    "plumber", "podiatrist", "printmaker", "radiographer", "sound engineer", "speech therapist", "statistician",
    "surveyor", "tax adviser", "translator", "veterinary surgeon", "web developer", "zoologist", "glassmaker",
    "horticulturist", "stonemason",
};

constexpr std::array<std::string_view, 50> kPuzzleFemale = {
    "Emily", "Aria", "Olivia", "Willow", "Lily", "Lisa", "Luna", "Eleanor", "Amelia", "Susan",
    "Lucy", "Patricia", "Barbara", "River", "Zoe", "Sarah", "Nova", "Grace", "Sophia", "Ava",
    "Hannah", "Karen", "Sky", "Sophie", "Margaret", "Scarlett", "Aurora", "Zoey", "Elizabeth", "Penelope",
    "Mia", "Charlotte", "Avery", "Chloe", "Ella", "Nora", "Hazel", "Violet", "Stella", "Ruby",
    "Alice", "Clara", "Ivy", "Julia", "Naomi", "Rose", "Anna", "Emma", "Isabella", "Abigail",
};

constexpr std::array<std::string_view, 50> kPuzzleMale = {
    "Harry", "Daniel", "James", "George", "John", "Liam", "Logan", "Ryder", "Noah", "Alexander",
    "Joseph", "William", "Charles", "Mason", "Christopher", "Kai", "Atlas", "Michael", "Aiden", "Matthew",
    "Phoenix", "Lucas", "Sebastian", "David", "Thomas", "Zion", "Andrew", "Henry", "Benjamin", "Luke",
    "Jack", "Riley", "Jacob", "Ethan", "Owen", "Samuel", "Oliver", "Elijah", "Leo", "Isaac",
    "Wyatt", "Caleb", "Nathan", "Adam", "Ryan", "Peter", "Robert", "Edward", "Arthur", "Felix",
};

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& arr, std::string_view s) {
  return std::find(arr.begin(), arr.end(), s) != arr.end();
}

}  // namespace

std::span<const std::string_view> given_names(Gender g) {
  if (g == Gender::female) return kFemaleGiven;
  return kMaleGiven;
}

std::span<const std::string_view> surnames() { return kSurnames; }
std::span<const std::string_view> hobbies() { return kHobbies; }
std::span<const std::string_view> occupations() { return kOccupations; }

bool is_hobby(std::string_view s) { return contains(kHobbies, s); }
bool is_occupation(std::string_view s) { return contains(kOccupations, s); }

std::span<const std::string_view> puzzle_names(Gender g) {
  if (g == Gender::female) return kPuzzleFemale;
  return kPuzzleMale;
}

std::optional<Gender> puzzle_name_gender(std::string_view name) {
  if (contains(kPuzzleFemale, name)) return Gender::female;
  if (contains(kPuzzleMale, name)) return Gender::male;
  return std::nullopt;
}

}  // namespace synthrl::vocab
