"""Bundled ICD-9 family code tables.

Family codes are the portion of an ICD-9-style code before the dot
separator.  Diagnosis families are 3-digit stems plus E/V-prefixed
stems; procedure families are rendered as zero-padded 4-digit stems
("0000".."0099") so they never collide with diagnosis stems and still
match the shared code pattern.  Descriptions are lowercase,
punctuation-free text used both for display and for bag-of-words
vocabularies downstream.
"""

from __future__ import annotations

import re

# Codes look like "410", "410.2", "V45.81", "E878.1", "0038.9".
# E stems carry 3 digits and V stems 2, mirroring the real coding schema.
ICD9_CODE_RE = re.compile(r"^(E\d{3}|V\d{2}|\d{3,4})(\.\d{1,3})?$")

DIAGNOSIS_FAMILIES: dict[str, str] = {
    # infectious and parasitic
    "003": "other salmonella infections",
    "008": "intestinal infections due to other organisms",
    "009": "ill defined intestinal infections",
    "011": "pulmonary tuberculosis",
    "038": "septicemia",
    "041": "bacterial infection in conditions classified elsewhere",
    "042": "human immunodeficiency virus disease",
    "053": "herpes zoster",
    "054": "herpes simplex",
    "070": "viral hepatitis",
    "079": "viral infection in conditions classified elsewhere",
    "112": "candidiasis",
    "117": "other mycoses",
    "135": "sarcoidosis",
    "136": "other infectious and parasitic diseases",
    # neoplasms
    "150": "malignant neoplasm of esophagus",
    "151": "malignant neoplasm of stomach",
    "153": "malignant neoplasm of colon",
    "154": "malignant neoplasm of rectum",
    "155": "malignant neoplasm of liver",
    "157": "malignant neoplasm of pancreas",
    "162": "malignant neoplasm of trachea bronchus and lung",
    "174": "malignant neoplasm of female breast",
    "185": "malignant neoplasm of prostate",
    "188": "malignant neoplasm of bladder",
    "189": "malignant neoplasm of kidney",
    "191": "malignant neoplasm of brain",
    "197": "secondary malignant neoplasm of respiratory and digestive systems",
    "198": "secondary malignant neoplasm of other specified sites",
    "199": "malignant neoplasm without specification of site",
    "200": "lymphosarcoma and reticulosarcoma",
    "202": "other malignant neoplasms of lymphoid and histiocytic tissue",
    "203": "multiple myeloma and immunoproliferative neoplasms",
    "204": "lymphoid leukemia",
    "205": "myeloid leukemia",
    "208": "leukemia of unspecified cell type",
    "211": "benign neoplasm of other parts of digestive system",
    "218": "uterine leiomyoma",
    "225": "benign neoplasm of brain and other parts of nervous system",
    "238": "neoplasm of uncertain behavior of other tissues",
    "239": "neoplasms of unspecified nature",
    # endocrine, nutritional, metabolic
    "241": "nontoxic nodular goiter",
    "242": "thyrotoxicosis",
    "244": "acquired hypothyroidism",
    "250": "diabetes mellitus",
    "251": "other disorders of pancreatic internal secretion",
    "253": "disorders of the pituitary gland",
    "255": "disorders of adrenal glands",
    "263": "other and unspecified protein calorie malnutrition",
    "272": "disorders of lipoid metabolism",
    "274": "gout",
    "275": "disorders of mineral metabolism",
    "276": "disorders of fluid electrolyte and acid base balance",
    "277": "other and unspecified disorders of metabolism",
    "278": "overweight obesity and other hyperalimentation",
    "279": "disorders involving the immune mechanism",
    # blood
    "280": "iron deficiency anemias",
    "281": "other deficiency anemias",
    "282": "hereditary hemolytic anemias",
    "284": "aplastic anemia and other bone marrow failure syndromes",
    "285": "other and unspecified anemias",
    "286": "coagulation defects",
    "287": "purpura and other hemorrhagic conditions",
    "288": "diseases of white blood cells",
    "289": "other diseases of blood and blood forming organs",
    # mental
    "290": "dementias",
    "291": "alcohol induced mental disorders",
    "292": "drug induced mental disorders",
    "293": "transient mental disorders due to conditions classified elsewhere",
    "294": "persistent mental disorders due to conditions classified elsewhere",
    "295": "schizophrenic disorders",
    "296": "episodic mood disorders",
    "298": "other nonorganic psychoses",
    "300": "anxiety dissociative and somatoform disorders",
    "303": "alcohol dependence syndrome",
    "304": "drug dependence",
    "305": "nondependent abuse of drugs",
    "307": "special symptoms or syndromes not elsewhere classified",
    "309": "adjustment reaction",
    "311": "depressive disorder not elsewhere classified",
    # nervous system and sense organs
    "320": "bacterial meningitis",
    "331": "other cerebral degenerations",
    "332": "parkinsons disease",
    "333": "other extrapyramidal disease and abnormal movement disorders",
    "340": "multiple sclerosis",
    "342": "hemiplegia and hemiparesis",
    "344": "other paralytic syndromes",
    "345": "epilepsy and recurrent seizures",
    "346": "migraine",
    "348": "other conditions of brain",
    "349": "other and unspecified disorders of the nervous system",
    "353": "nerve root and plexus disorders",
    "356": "hereditary and idiopathic peripheral neuropathy",
    "357": "inflammatory and toxic neuropathy",
    "362": "other retinal disorders",
    "365": "glaucoma",
    "366": "cataract",
    "369": "blindness and low vision",
    "386": "vertiginous syndromes and other disorders of vestibular system",
    "389": "hearing loss",
    # circulatory
    "394": "diseases of mitral valve",
    "395": "diseases of aortic valve",
    "396": "diseases of mitral and aortic valves",
    "398": "other rheumatic heart disease",
    "401": "essential hypertension",
    "402": "hypertensive heart disease",
    "403": "hypertensive chronic kidney disease",
    "404": "hypertensive heart and chronic kidney disease",
    "405": "secondary hypertension",
    "410": "acute myocardial infarction",
    "411": "other acute and subacute forms of ischemic heart disease",
    "412": "old myocardial infarction",
    "413": "angina pectoris",
    "414": "other forms of chronic ischemic heart disease",
    "415": "acute pulmonary heart disease",
    "416": "chronic pulmonary heart disease",
    "417": "other diseases of pulmonary circulation",
    "420": "acute pericarditis",
    "421": "acute and subacute endocarditis",
    "422": "acute myocarditis",
    "423": "other diseases of pericardium",
    "424": "other diseases of endocardium",
    "425": "cardiomyopathy",
    "426": "conduction disorders",
    "427": "cardiac dysrhythmias",
    "428": "heart failure",
    "429": "ill defined descriptions and complications of heart disease",
    "430": "subarachnoid hemorrhage",
    "431": "intracerebral hemorrhage",
    "432": "other and unspecified intracranial hemorrhage",
    "433": "occlusion and stenosis of precerebral arteries",
    "434": "occlusion of cerebral arteries",
    "435": "transient cerebral ischemia",
    "436": "acute but ill defined cerebrovascular disease",
    "437": "other and ill defined cerebrovascular disease",
    "438": "late effects of cerebrovascular disease",
    "440": "atherosclerosis",
    "441": "aortic aneurysm and dissection",
    "442": "other aneurysm",
    "443": "other peripheral vascular disease",
    "444": "arterial embolism and thrombosis",
    "447": "other disorders of arteries and arterioles",
    "451": "phlebitis and thrombophlebitis",
    "453": "other venous embolism and thrombosis",
    "454": "varicose veins of lower extremities",
    "455": "hemorrhoids",
    "458": "hypotension",
    "459": "other disorders of circulatory system",
    # respiratory
    "462": "acute pharyngitis",
    "465": "acute upper respiratory infections of multiple sites",
    "466": "acute bronchitis and bronchiolitis",
    "473": "chronic sinusitis",
    "478": "other diseases of upper respiratory tract",
    "480": "viral pneumonia",
    "481": "pneumococcal pneumonia",
    "482": "other bacterial pneumonia",
    "483": "pneumonia due to other specified organism",
    "485": "bronchopneumonia organism unspecified",
    "486": "pneumonia organism unspecified",
    "487": "influenza",
    "490": "bronchitis not specified as acute or chronic",
    "491": "chronic bronchitis",
    "492": "emphysema",
    "493": "asthma",
    "494": "bronchiectasis",
    "496": "chronic airway obstruction not elsewhere classified",
    "507": "pneumonitis due to solids and liquids",
    "510": "empyema",
    "511": "pleurisy",
    "512": "pneumothorax and air leak",
    "513": "abscess of lung and mediastinum",
    "515": "postinflammatory pulmonary fibrosis",
    "516": "other alveolar and parietoalveolar pneumonopathy",
    "518": "other diseases of lung",
    "519": "other diseases of respiratory system",
    # digestive
    "530": "diseases of esophagus",
    "531": "gastric ulcer",
    "532": "duodenal ulcer",
    "535": "gastritis and duodenitis",
    "536": "disorders of function of stomach",
    "537": "other disorders of stomach and duodenum",
    "540": "acute appendicitis",
    "550": "inguinal hernia",
    "553": "other hernia of abdominal cavity",
    "555": "regional enteritis",
    "556": "ulcerative colitis",
    "557": "vascular insufficiency of intestine",
    "558": "other and unspecified noninfectious gastroenteritis and colitis",
    "560": "intestinal obstruction without mention of hernia",
    "562": "diverticula of intestine",
    "564": "functional digestive disorders not elsewhere classified",
    "567": "peritonitis and retroperitoneal infections",
    "569": "other disorders of intestine",
    "570": "acute and subacute necrosis of liver",
    "571": "chronic liver disease and cirrhosis",
    "572": "liver abscess and sequelae of chronic liver disease",
    "573": "other disorders of liver",
    "574": "cholelithiasis",
    "575": "other disorders of gallbladder",
    "576": "other disorders of biliary tract",
    "577": "diseases of pancreas",
    "578": "gastrointestinal hemorrhage",
    # genitourinary
    "580": "acute glomerulonephritis",
    "581": "nephrotic syndrome",
    "584": "acute kidney failure",
    "585": "chronic kidney disease",
    "586": "renal failure unspecified",
    "590": "infections of kidney",
    "591": "hydronephrosis",
    "592": "calculus of kidney and ureter",
    "593": "other disorders of kidney and ureter",
    "595": "cystitis",
    "596": "other disorders of bladder",
    "599": "other disorders of urethra and urinary tract",
    "600": "hyperplasia of prostate",
    "601": "inflammatory diseases of prostate",
    "608": "other disorders of male genital organs",
    "610": "benign mammary dysplasias",
    "614": "inflammatory disease of female pelvic organs",
    "616": "inflammatory disease of cervix vagina and vulva",
    "618": "genital prolapse",
    "620": "noninflammatory disorders of ovary and fallopian tube",
    "626": "disorders of menstruation and abnormal bleeding",
    # pregnancy
    "642": "hypertension complicating pregnancy childbirth and the puerperium",
    "648": "other current conditions in the mother classifiable elsewhere",
    # skin
    "680": "carbuncle and furuncle",
    "681": "cellulitis and abscess of finger and toe",
    "682": "other cellulitis and abscess",
    "686": "other local infections of skin and subcutaneous tissue",
    "691": "atopic dermatitis and related conditions",
    "692": "contact dermatitis and other eczema",
    "693": "dermatitis due to substances taken internally",
    "696": "psoriasis and similar disorders",
    "707": "chronic ulcer of skin",
    "708": "urticaria",
    "709": "other disorders of skin and subcutaneous tissue",
    # musculoskeletal
    "710": "diffuse diseases of connective tissue",
    "711": "arthropathy associated with infections",
    "714": "rheumatoid arthritis and other inflammatory polyarthropathies",
    "715": "osteoarthrosis and allied disorders",
    "716": "other and unspecified arthropathies",
    "719": "other and unspecified disorders of joint",
    "720": "ankylosing spondylitis and other inflammatory spondylopathies",
    "721": "spondylosis and allied disorders",
    "722": "intervertebral disc disorders",
    "723": "other disorders of cervical region",
    "724": "other and unspecified disorders of back",
    "726": "peripheral enthesopathies and allied syndromes",
    "727": "other disorders of synovium tendon and bursa",
    "728": "disorders of muscle ligament and fascia",
    "730": "osteomyelitis periostitis and other infections involving bone",
    "733": "other disorders of bone and cartilage",
    # congenital
    "745": "bulbus cordis anomalies and anomalies of cardiac septal closure",
    "746": "other congenital anomalies of heart",
    "747": "other congenital anomalies of circulatory system",
    "753": "congenital anomalies of urinary system",
    "758": "chromosomal anomalies",
    # symptoms and ill-defined
    "780": "general symptoms",
    "781": "symptoms involving nervous and musculoskeletal systems",
    "782": "symptoms involving skin and other integumentary tissue",
    "783": "symptoms concerning nutrition metabolism and development",
    "784": "symptoms involving head and neck",
    "785": "symptoms involving cardiovascular system",
    "786": "symptoms involving respiratory system and other chest symptoms",
    "787": "symptoms involving digestive system",
    "788": "symptoms involving urinary system",
    "789": "other symptoms involving abdomen and pelvis",
    "790": "nonspecific findings on examination of blood",
    "793": "nonspecific abnormal findings on radiological examination",
    "794": "nonspecific abnormal results of function studies",
    "796": "other nonspecific abnormal findings",
    "799": "other ill defined and unknown causes of morbidity and mortality",
    # injury and poisoning
    "801": "fracture of base of skull",
    "805": "fracture of vertebral column without mention of spinal cord injury",
    "807": "fracture of rib sternum larynx and trachea",
    "808": "fracture of pelvis",
    "812": "fracture of humerus",
    "813": "fracture of radius and ulna",
    "820": "fracture of neck of femur",
    "821": "fracture of other and unspecified parts of femur",
    "823": "fracture of tibia and fibula",
    "824": "fracture of ankle",
    "850": "concussion",
    "851": "cerebral laceration and contusion",
    "852": "subarachnoid subdural and extradural hemorrhage following injury",
    "853": "other and unspecified intracranial hemorrhage following injury",
    "854": "intracranial injury of other and unspecified nature",
    "860": "traumatic pneumothorax and hemothorax",
    "861": "injury to heart and lung",
    "862": "injury to other and unspecified intrathoracic organs",
    "863": "injury to gastrointestinal tract",
    "864": "injury to liver",
    "865": "injury to spleen",
    "866": "injury to kidney",
    "873": "other open wound of head",
    "879": "open wound of other and unspecified sites except limbs",
    "881": "open wound of elbow forearm and wrist",
    "891": "open wound of knee leg and ankle",
    "903": "injury to blood vessels of upper extremity",
    "904": "injury to blood vessels of lower extremity",
    "920": "contusion of face scalp and neck except eye",
    "922": "contusion of trunk",
    "924": "contusion of lower limb and of other and unspecified sites",
    "934": "foreign body in trachea bronchus and lung",
    "935": "foreign body in mouth esophagus and stomach",
    "941": "burn of face head and neck",
    "942": "burn of trunk",
    "945": "burn of lower limb",
    "948": "burns classified according to extent of body surface involved",
    "952": "spinal cord injury without evidence of spinal bone injury",
    "958": "certain early complications of trauma",
    "959": "injury other and unspecified",
    "960": "poisoning by antibiotics",
    "962": "poisoning by hormones and synthetic substitutes",
    "965": "poisoning by analgesics antipyretics and antirheumatics",
    "967": "poisoning by sedatives and hypnotics",
    "969": "poisoning by psychotropic agents",
    "972": "poisoning by agents primarily affecting the cardiovascular system",
    "977": "poisoning by other and unspecified drugs and medicinal substances",
    "980": "toxic effect of alcohol",
    "986": "toxic effect of carbon monoxide",
    "987": "toxic effect of other gases fumes or vapors",
    "991": "effects of reduced temperature",
    "992": "effects of heat and light",
    "994": "effects of other external causes",
    "995": "certain adverse effects not elsewhere classified",
    "996": "complications peculiar to certain specified procedures",
    "997": "complications affecting specified body systems not elsewhere classified",
    "998": "other complications of procedures not elsewhere classified",
    "999": "complications of medical care not elsewhere classified",
    # supplementary V codes
    "V10": "personal history of malignant neoplasm",
    "V12": "personal history of certain other diseases",
    "V15": "other personal history presenting hazards to health",
    "V42": "organ or tissue replaced by transplant",
    "V43": "organ or tissue replaced by other means",
    "V44": "artificial opening status",
    "V45": "other postprocedural states",
    "V46": "other dependence on machines and devices",
    "V49": "other conditions influencing health status",
    "V54": "other orthopedic aftercare",
    "V57": "care involving use of rehabilitation procedures",
    "V58": "encounter for other and unspecified procedures and aftercare",
    "V64": "persons encountering health services for specific procedures not carried out",
    "V66": "convalescence and palliative care",
    "V70": "general medical examination",
    # external cause E codes
    "E849": "place of occurrence",
    "E878": "surgical operation as the cause of abnormal reaction of patient",
    "E879": "other procedures as the cause of abnormal reaction of patient",
    "E880": "accidental fall on or from stairs or steps",
    "E884": "other accidental falls from one level to another",
    "E885": "accidental fall on same level from slipping tripping or stumbling",
    "E888": "other and unspecified fall",
    "E930": "antibiotics causing adverse effects in therapeutic use",
    "E932": "hormones and synthetic substitutes causing adverse effects in therapeutic use",
    "E934": "agents primarily affecting blood constituents causing adverse effects",
    "E942": "agents primarily affecting the cardiovascular system causing adverse effects",
    "E947": "other and unspecified drugs causing adverse effects in therapeutic use",
    "E950": "suicide and self inflicted poisoning by solid or liquid substances",
}

# ICD-9 procedure categories 00-99, zero-padded to four digits so the
# stems satisfy the shared code pattern without clashing with diagnoses.
_PROCEDURE_CATEGORIES = [
    "procedures and interventions not elsewhere classified",
    "incision and excision of skull brain and cerebral meninges",
    "other operations on skull brain and cerebral meninges",
    "operations on spinal cord and spinal canal structures",
    "operations on cranial and peripheral nerves",
    "operations on sympathetic nerves or ganglia",
    "operations on thyroid and parathyroid glands",
    "operations on other endocrine glands",
    "operations on eyelids",
    "operations on lacrimal system",
    "operations on conjunctiva",
    "operations on cornea",
    "operations on iris ciliary body sclera and anterior chamber",
    "operations on lens",
    "operations on retina choroid vitreous and posterior chamber",
    "operations on extraocular muscles",
    "operations on orbit and eyeball",
    "other miscellaneous diagnostic and therapeutic procedures",
    "operations on external ear",
    "reconstructive operations on middle ear",
    "other operations on middle and inner ear",
    "operations on nose",
    "operations on nasal sinuses",
    "removal and restoration of teeth",
    "other operations on teeth gums and alveoli",
    "operations on tongue",
    "operations on salivary glands and ducts",
    "other operations on mouth and face",
    "operations on tonsils and adenoids",
    "operations on pharynx",
    "excision of larynx",
    "other operations on larynx and trachea",
    "excision of lung and bronchus",
    "other operations on lung and bronchus",
    "operations on chest wall pleura mediastinum and diaphragm",
    "operations on valves and septa of heart",
    "operations on vessels of heart",
    "other operations on heart and pericardium",
    "incision excision and occlusion of vessels",
    "other operations on vessels",
    "operations on lymphatic system",
    "operations on bone marrow and spleen",
    "operations on esophagus",
    "incision and excision of stomach",
    "other operations on stomach",
    "incision excision and anastomosis of intestine",
    "other operations on intestine",
    "operations on appendix",
    "operations on rectum rectosigmoid and perirectal tissue",
    "operations on anus",
    "operations on liver",
    "operations on gallbladder and biliary tract",
    "operations on pancreas",
    "repair of hernia",
    "other operations on abdominal region",
    "operations on kidney",
    "operations on ureter",
    "operations on urinary bladder",
    "operations on urethra",
    "other operations on urinary tract",
    "operations on prostate and seminal vesicles",
    "operations on scrotum and tunica vaginalis",
    "operations on testes",
    "operations on spermatic cord epididymis and vas deferens",
    "operations on penis",
    "operations on ovary",
    "operations on fallopian tubes",
    "operations on cervix",
    "other incision and excision of uterus",
    "other operations on uterus and supporting structures",
    "operations on vagina and cul de sac",
    "operations on vulva and perineum",
    "forceps vacuum and breech delivery",
    "other procedures inducing or assisting delivery",
    "cesarean section and removal of fetus",
    "other obstetric operations",
    "operations on facial bones and joints",
    "incision excision and division of other bones",
    "other operations on bones except facial bones",
    "reduction of fracture and dislocation",
    "incision and excision of joint structures",
    "repair and plastic operations on joint structures",
    "operations on muscle tendon and fascia of hand",
    "operations on muscle tendon fascia and bursa except hand",
    "other procedures on musculoskeletal system",
    "operations on the breast",
    "operations on skin and subcutaneous tissue",
    "diagnostic radiology",
    "other diagnostic radiology and related techniques",
    "interview evaluation consultation and examination",
    "microscopic examination of specimens one",
    "microscopic examination of specimens two",
    "nuclear medicine",
    "physical therapy respiratory therapy rehabilitation and related procedures",
    "procedures related to the psyche",
    "ophthalmologic and otologic diagnosis and treatment",
    "nonoperative intubation and irrigation",
    "replacement and removal of therapeutic appliances",
    "nonoperative removal of foreign body or calculus",
    "other nonoperative procedures",
]

PROCEDURE_FAMILIES: dict[str, str] = {
    f"{i:04d}": desc for i, desc in enumerate(_PROCEDURE_CATEGORIES)
}

# Sampling order for the synthetic generator: common ICU families first,
# everything else in table order.  A Zipf-like law over this ranking makes
# rare codes exist while keeping cardiovascular admissions frequent.
_COMMON_FIRST = [
    "428", "427", "401", "414", "410", "276", "250", "285", "584", "518",
    "272", "486", "599", "458", "425", "403", "585", "244", "491", "493",
    "278", "305", "311", "300", "496", "530", "578", "571", "574", "577",
    "287", "424", "426", "412", "413", "433", "434", "438", "507", "511",
    "512", "995", "996", "997", "998", "038", "041", "042", "070", "280",
]

DIAGNOSIS_RANKING: list[str] = _COMMON_FIRST + [
    code for code in DIAGNOSIS_FAMILIES if code not in _COMMON_FIRST
]

_COMMON_PROCEDURES = [
    "0036", "0037", "0038", "0039", "0035", "0096", "0099", "0089", "0093",
    "0088", "0045", "0051", "0057", "0081", "0086", "0098", "0097", "0087",
    "0034", "0031",
]

PROCEDURE_RANKING: list[str] = _COMMON_PROCEDURES + [
    code for code in PROCEDURE_FAMILIES if code not in _COMMON_PROCEDURES
]
